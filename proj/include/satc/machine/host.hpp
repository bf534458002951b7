#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "../bitnum/rat.hpp"
#include "../bitnum/unat.hpp"
#include "../builtins/primes.hpp"
#include "../error.hpp"

namespace satc
{

/// Host function callable from an expression as (call name args...).
/// Arguments and result are exact rationals whatever the spec's datatype.
using host_fn = std::function<rat( std::span<const rat> )>;

/// Decision procedure over bit strings (a black-box language).
using bit_predicate = std::function<bool( const bit_string& )>;

struct host_function
{
  std::optional<std::size_t> arity; ///< nullopt: variadic
  host_fn fn;
  /// False when |f(x)| is not O(|x|) (e.g. 2^k).  The compiler refuses such calls.
  bool size_preserving = true;
};

class host_registry
{
public:
  host_registry& add( const std::string& name, host_function f )
  {
    fns_[name] = std::move( f );
    return *this;
  }

  const host_function* find( const std::string& name ) const
  {
    auto it = fns_.find( name );
    return it == fns_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> names() const
  {
    std::vector<std::string> out;
    for ( const auto& [k, v] : fns_ )
      out.push_back( k );
    return out;
  }

  rat call( const std::string& name, std::span<const rat> args ) const
  {
    const auto* f = find( name );
    if ( !f )
      throw eval_error( "unknown host function '" + name + "'" );
    if ( f->arity && *f->arity != args.size() )
      throw eval_error( "host function '" + name + "' expects " + std::to_string( *f->arity ) + " arguments, got " +
                        std::to_string( args.size() ) );
    return f->fn( args );
  }

private:
  std::map<std::string, host_function> fns_;
};

namespace detail
{

inline std::uint64_t small_natural( const rat& r, const char* who )
{
  if ( r.negative() || !r.is_integer() || r.num().bit_length() > 32 )
    throw eval_error( std::string( who ) + ": argument must be a natural number below 2^32" );
  return r.num().to_u64();
}

inline bool truthy( const rat& r ) { return !r.is_zero(); }

} // namespace detail

/// Adapt a predicate to the calling convention (n, b_1, ..., b_k), k >= n:
/// the string is b_1 ... b_n, where b_i is nonzero for a 1.
inline host_function bits_host( bit_predicate pred )
{
  return { std::nullopt, [pred = std::move( pred )]( std::span<const rat> args ) -> rat {
            if ( args.empty() )
              throw eval_error( "string predicate called without a length" );
            const auto n = detail::small_natural( args[0], "string predicate" );
            if ( n + 1 > args.size() )
              throw eval_error( "string predicate: length exceeds the supplied bits" );
            std::vector<bool> bits( n );
            for ( std::size_t i = 0; i < n; ++i )
              bits[i] = detail::truthy( args[i + 1] );
            return rat( pred( bit_string( std::move( bits ) ) ) ? 1u : 0u );
          } };
}

inline bool parity_predicate( const bit_string& w )
{
  bool odd = false;
  for ( std::size_t i = 1; i <= w.size(); ++i )
    odd ^= w.at( i );
  return odd;
}

inline bool bigram11_predicate( const bit_string& w )
{
  for ( std::size_t i = 1; i < w.size(); ++i )
    if ( w.at( i ) && w.at( i + 1 ) )
      return true;
  return false;
}

inline bool majority_predicate( const bit_string& w )
{
  std::size_t ones = 0;
  for ( std::size_t i = 1; i <= w.size(); ++i )
    ones += w.at( i );
  return 2 * ones > w.size();
}

/// Named predicates available to the CLI and spec files.
inline const std::map<std::string, bit_predicate>& standard_predicates()
{
  static const std::map<std::string, bit_predicate> preds = {
      { "parity", parity_predicate }, { "bigram11", bigram11_predicate }, { "majority", majority_predicate } };
  return preds;
}

/// prime(i) = i-th prime, pow2(k) = 2^k, bitlen(k) = |k|, plus every
/// standard predicate under its own name.
inline host_registry standard_host()
{
  host_registry h;
  h.add( "prime", { 1, []( std::span<const rat> a ) {
                     return rat( nth_prime( detail::small_natural( a[0], "prime" ) ), unat( 1 ) );
                   } } );
  h.add( "pow2", { 1,
                   []( std::span<const rat> a ) {
                     return rat( unat::pow2( detail::small_natural( a[0], "pow2" ) ), unat( 1 ) );
                   },
                   false } );
  h.add( "bitlen", { 1, []( std::span<const rat> a ) {
                      if ( !a[0].is_integer() )
                        throw eval_error( "bitlen: argument must be an integer" );
                      return rat( a[0].num().bit_length() );
                    } } );
  for ( const auto& [name, pred] : standard_predicates() )
    h.add( name, bits_host( pred ) );
  return h;
}

} // namespace satc
