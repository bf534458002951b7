#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "../bitnum/size.hpp"
#include "attention.hpp"
#include "eval.hpp"
#include "spec.hpp"

namespace satc
{

/// Check of the bound |sum_j x_j| <= 4cz + 2 log n + 1 for a head sum, where
/// z is the largest summand size and c = max(|p_j|, |q_j|) / z.  Only
/// floats are checked; over the rationals the bound does not apply.
struct lin_bits_check
{
  bool applicable = false;
  std::size_t checks = 0;
  std::size_t violations = 0;
  // instance with the least slack
  std::size_t n = 0;
  std::size_t z = 0;
  double c = 0;
  std::size_t sum_size = 0;
  double bound = 0;

  void merge( const lin_bits_check& o )
  {
    if ( !o.applicable )
      return;
    const bool take = !applicable || o.bound - o.sum_size < bound - sum_size;
    applicable = true;
    checks += o.checks;
    violations += o.violations;
    if ( take )
    {
      n = o.n;
      z = o.z;
      c = o.c;
      sum_size = o.sum_size;
      bound = o.bound;
    }
  }
};

/// One float summation against the bound.
inline lin_bits_check check_lin_bits( std::span<const flt> summands, const flt& sum )
{
  lin_bits_check r;
  r.applicable = true;
  r.checks = 1;
  r.n = summands.size();
  std::size_t comp = 0;
  for ( const auto& x : summands )
  {
    r.z = std::max( r.z, bit_size( x ) );
    comp = std::max<std::size_t>( comp, std::max<std::size_t>( x.num().bit_length(), x.exp() + 1 ) );
  }
  r.c = static_cast<double>( comp ) / static_cast<double>( r.z );
  r.sum_size = bit_size( sum );
  r.bound = 4.0 * static_cast<double>( comp ) + 2.0 * std::log2( static_cast<double>( r.n ) ) + 1.0;
  r.violations = static_cast<double>( r.sum_size ) > r.bound + 1e-9 ? 1 : 0;
  return r;
}

template<class D>
struct head_trace
{
  attention_kind kind = attention_kind::saturated;
  std::vector<std::vector<D>> scores;         ///< [i][j]; empty unless kept
  std::vector<std::vector<std::size_t>> ties; ///< maximizing j per query i (0-based)
  std::vector<std::vector<D>> outputs;        ///< [i], width m / H
  std::size_t max_output_size = 0;
  lin_bits_check lin_bits;
};

template<class D>
struct layer_trace
{
  std::vector<head_trace<D>> heads; ///< empty for the embedding layer
  std::vector<std::vector<D>> values;
  std::size_t max_value_size = 0;
};

template<class D>
struct value_trace
{
  std::vector<std::size_t> tokens;
  std::vector<layer_trace<D>> layers; ///< layers[0] is the embedding
  D classifier_value;
  bool accepted = false;

  std::size_t n() const { return tokens.size(); }
  const std::vector<D>& final_first() const { return layers.back().values.front(); }
};

struct run_options
{
  bool keep_scores = true;
};

namespace detail
{

template<class D>
std::size_t max_size_of( const std::vector<std::vector<D>>& rows )
{
  std::size_t s = 0;
  for ( const auto& r : rows )
    s = std::max( s, max_component_size<D>( r ) );
  return s;
}

template<class D>
head_trace<D> run_head( const transformer_spec& sp, const head_spec& hs, std::size_t h,
                        const std::vector<std::vector<D>>& v, const run_options& opt )
{
  const std::size_t n = v.size(), B = sp.block();
  const auto* host = sp.host.get();
  head_trace<D> t;
  t.kind = hs.kind;
  const bool row_invariant = !usage( hs.scorer ).uses_x;
  std::vector<D> row( n ), w;
  std::vector<D> out;
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( i == 0 || !row_invariant )
    {
      for ( std::size_t j = 0; j < n; ++j )
        row[j] = eval_expr<D>( hs.scorer, v[i], v[j], host );
      w = attend<D>( hs.kind, row );
      out.assign( B, D() );
      std::vector<flt> summands;
      for ( std::size_t k = 0; k < B; ++k )
      {
        if constexpr ( std::is_same_v<D, flt> )
          summands.clear();
        for ( std::size_t j = 0; j < n; ++j )
        {
          const D term = w[j] * v[j][h * B + k];
          out[k] = out[k] + term;
          if constexpr ( std::is_same_v<D, flt> )
            summands.push_back( term );
        }
        if constexpr ( std::is_same_v<D, flt> )
          t.lin_bits.merge( check_lin_bits( summands, out[k] ) );
      }
    }
    else if constexpr ( std::is_same_v<D, flt> )
    {
      // identical sums; count the checks without recomputing them
      for ( std::size_t k = 0; k < B; ++k )
        ++t.lin_bits.checks;
    }
    if ( opt.keep_scores )
      t.scores.push_back( row );
    t.ties.push_back( max_set<D>( row ) );
    t.outputs.push_back( out );
  }
  t.max_output_size = max_size_of( t.outputs );
  return t;
}

} // namespace detail

/// Run the machine on a token sequence (indices into the alphabet).
template<class D>
value_trace<D> run_typed( const transformer_spec& sp, const std::vector<std::size_t>& tokens, const run_options& opt = {} )
{
  if ( tokens.empty() )
    throw domain_error( "the input string must be nonempty" );
  if ( sp.max_length && tokens.size() > sp.max_length )
    throw domain_error( "input length " + std::to_string( tokens.size() ) + " exceeds the spec's maximum " +
                        std::to_string( sp.max_length ) );
  const std::size_t n = tokens.size(), m = sp.width;
  const auto* host = sp.host.get();
  value_trace<D> tr;
  tr.tokens = tokens;

  layer_trace<D> emb;
  emb.values.resize( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( tokens[i] >= sp.alphabet.size() )
      throw eval_error( "token index out of range" );
    std::vector<D> onehot( sp.alphabet.size() );
    onehot[tokens[i]] = D( 1u );
    const std::vector<D> pos{ D( static_cast<std::uint64_t>( i + 1 ) ) };
    emb.values[i] = eval_func<D>( sp.embedding, onehot, pos, host );
  }
  emb.max_value_size = detail::max_size_of( emb.values );
  tr.layers.push_back( std::move( emb ) );

  for ( const auto& ls : sp.layers )
  {
    const auto& v = tr.layers.back().values;
    layer_trace<D> lt;
    for ( std::size_t h = 0; h < sp.heads; ++h )
      lt.heads.push_back( detail::run_head<D>( sp, ls.heads[h], h, v, opt ) );
    lt.values.resize( n );
    std::vector<D> cat( m );
    for ( std::size_t i = 0; i < n; ++i )
    {
      for ( std::size_t h = 0; h < sp.heads; ++h )
        std::copy( lt.heads[h].outputs[i].begin(), lt.heads[h].outputs[i].end(), cat.begin() + h * sp.block() );
      lt.values[i] = eval_func<D>( ls.activation, v[i], cat, host );
    }
    lt.max_value_size = detail::max_size_of( lt.values );
    tr.layers.push_back( std::move( lt ) );
  }

  const auto& v1 = tr.final_first();
  D s = arith<D>::lift( sp.classifier_b );
  for ( std::size_t k = 0; k < m; ++k )
    s = s + arith<D>::lift( sp.classifier_w[k] ) * v1[k];
  tr.classifier_value = s;
  tr.accepted = s > D();
  return tr;
}

using any_trace = std::variant<value_trace<flt>, value_trace<rat>>;

inline any_trace run( const transformer_spec& sp, const std::vector<std::size_t>& tokens, const run_options& opt = {} )
{
  if ( sp.type == datatype::flt )
    return run_typed<flt>( sp, tokens, opt );
  return run_typed<rat>( sp, tokens, opt );
}

inline any_trace run( const transformer_spec& sp, const std::string& w, const run_options& opt = {} )
{
  return run( sp, sp.tokenize( w ), opt );
}

/// W . v_{L,1} + b > 0.
inline bool recognize( const transformer_spec& sp, const std::vector<std::size_t>& tokens )
{
  const run_options opt{ false };
  if ( sp.type == datatype::flt )
    return run_typed<flt>( sp, tokens, opt ).accepted;
  return run_typed<rat>( sp, tokens, opt ).accepted;
}

inline bool recognize( const transformer_spec& sp, const std::string& w ) { return recognize( sp, sp.tokenize( w ) ); }

} // namespace satc
