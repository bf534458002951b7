#pragma once

#include <memory>
#include <string>
#include <vector>

#include "../machine/run.hpp"
#include "primes.hpp"

namespace satc
{

namespace detail
{

inline transformer_spec binary_spec( std::string name, datatype d, std::size_t width, std::size_t heads )
{
  transformer_spec sp;
  sp.name = std::move( name );
  sp.alphabet = { "0", "1" };
  sp.type = d;
  sp.width = width;
  sp.heads = heads;
  sp.classifier_w.assign( width, rat() );
  sp.classifier_w[0] = rat( 1u );
  return sp;
}

inline std::shared_ptr<host_registry> host_with( const std::string& name, bit_predicate pred )
{
  auto h = std::make_shared<host_registry>( standard_host() );
  h->add( name, bits_host( std::move( pred ) ) );
  return h;
}

} // namespace detail

/// MAJ = { w : #1(w) > #0(w) }.  One-hot embedding, one head attending
/// everywhere, activation (#1/n > #0/n).
inline transformer_spec build_majority( datatype d = datatype::flt )
{
  using namespace ex;
  auto sp = detail::binary_spec( "maj", d, 2, 1 );
  sp.host = std::make_shared<const host_registry>( standard_host() );
  sp.embedding = { x( 0 ), x( 1 ) };
  sp.layers.push_back( { { { attention_kind::saturated, c( 1 ) } }, { gt( y( 1 ), y( 0 ) ), c( 0 ) } } );
  sp.validate();
  return sp;
}

/// Layer normalization of a pair with epsilon added to the variance.
inline func layer_norm_pair( const expr& t1, const expr& t2, const rat& eps )
{
  using namespace ex;
  const rat half( 1u, 2u );
  const expr mu = mul( c( half ), add( t1, t2 ) );
  const expr d1 = sub( t1, mu ), d2 = sub( t2, mu );
  const expr var = mul( c( half ), add( mul( d1, d1 ), mul( d2, d2 ) ) );
  const expr sd = sqrt( add( var, c( eps ) ) );
  return { div( d1, sd ), div( d2, sd ) };
}

/// Pre-norm pair ((#1 - #0)/n, 0), layer-normalized, accept iff t1 > t2.
inline transformer_spec build_majority_layernorm()
{
  using namespace ex;
  auto sp = detail::binary_spec( "maj-ln", datatype::flt, 2, 1 );
  sp.host = std::make_shared<const host_registry>( standard_host() );
  sp.embedding = { x( 0 ), x( 1 ) };
  sp.layers.push_back( { { { attention_kind::saturated, c( 1 ) } },
                         layer_norm_pair( sub( y( 1 ), y( 0 ) ), c( 0 ), rat( 1u, 4u ) ) } );
  sp.classifier_w = { rat( 1u ), -rat( 1u ) };
  sp.validate();
  return sp;
}

struct layer_norm_trace
{
  flt t1_pre, t2_pre;
  flt t1, t2;
};

/// Pre- and post-norm pairs at position 1 of a maj-ln run.
inline layer_norm_trace trace_layer_norm( const transformer_spec& sp, const std::string& w )
{
  const auto tr = run_typed<flt>( sp, sp.tokenize( w ) );
  const auto& b = tr.layers[1].heads[0].outputs[0];
  const auto& v = tr.layers[1].values[0];
  return { b[1] - b[0], flt(), v[0], v[1] };
}

/// Over the rationals: position i embeds 1/p_i when w_i = 1.  A uniform head
/// sums to (sum 1/p_i) / n; a second head with the position as score returns
/// n, so the activation recovers the sum, reads w_i = [p_i | denominator]
/// and applies g.
inline transformer_spec build_prime_universal( const std::string& g_name, bit_predicate g, std::size_t n_max )
{
  using namespace ex;
  if ( n_max == 0 || n_max > 64 )
    throw domain_error( "prime-universal: n_max must be in 1..64" );
  auto sp = detail::binary_spec( "prime-universal", datatype::rat, 2, 2 );
  sp.host = detail::host_with( g_name, std::move( g ) );
  sp.max_length = n_max;
  sp.embedding = { select( x( 1 ), div( c( 1 ), call( "prime", { y( 0 ) } ) ), c( 0 ) ), y( 0 ) };
  const expr sum = mul( y( 0 ), y( 1 ) );
  const expr q = den( sum );
  std::vector<expr> args{ y( 1 ) };
  const auto p = primes( n_max );
  for ( std::size_t i = 0; i < n_max; ++i )
    args.push_back( divides( c( rat( p[i], unat( 1 ) ) ), q ) );
  sp.layers.push_back( { { { attention_kind::uniform, c( 0 ) }, { attention_kind::saturated, y( 1 ) } },
                         { call( g_name, std::move( args ) ), sum } } );
  sp.validate();
  return sp;
}

/// Position i embeds (2^{i-1} w_i, i, 2^{|i|}).  Head 1 averages the first
/// component, heads 2 and 3 pick the last position and return n and 2^{|n|}.
/// Then u = b1 b3 = k w with k = b3 / b2, exactly in both datatypes (over
/// floats k = floor(2^{|n|}/n)), so w = idiv(u, k).  The bits of w feed delta.
/// Output components: (delta, w, n).
inline transformer_spec build_resource_bounded( const std::string& delta_name, bit_predicate delta, datatype d,
                                                std::size_t n_max )
{
  using namespace ex;
  if ( n_max == 0 || n_max > 32 )
    throw domain_error( "resource-bounded: n_max must be in 1..32" );
  auto sp = detail::binary_spec( "resource-bounded", d, 3, 3 );
  sp.host = detail::host_with( delta_name, std::move( delta ) );
  sp.max_length = n_max;
  sp.embedding = { select( x( 1 ), call( "pow2", { sub( y( 0 ), c( 1 ) ) } ), c( 0 ) ), y( 0 ),
                   call( "pow2", { call( "bitlen", { y( 0 ) } ) } ) };
  const expr u = mul( y( 0 ), y( 2 ) );
  const expr k = div( y( 2 ), y( 1 ) );
  const expr w = idiv( u, k );
  std::vector<expr> args{ y( 1 ) };
  for ( std::size_t i = 0; i < n_max; ++i )
  {
    const rat lo( unat::pow2( i ), unat( 1 ) ), hi( unat::pow2( i + 1 ), unat( 1 ) );
    args.push_back( sub( idiv( w, c( lo ) ), mul( c( 2 ), idiv( w, c( hi ) ) ) ) );
  }
  sp.layers.push_back( { { { attention_kind::uniform, c( 0 ) },
                           { attention_kind::saturated, y( 1 ) },
                           { attention_kind::saturated, y( 1 ) } },
                         { call( delta_name, std::move( args ) ), w, y( 1 ) } } );
  sp.validate();
  return sp;
}

/// Two hard heads over v = (w_i, i, w_i, i): head 1 finds the first 1 (or
/// position 1), head 2 the last position.  Accepts iff some w_i = 1 with i < n.
inline transformer_spec build_hard_demo()
{
  using namespace ex;
  auto sp = detail::binary_spec( "hard-demo", datatype::flt, 4, 2 );
  sp.host = std::make_shared<const host_registry>( standard_host() );
  sp.embedding = { x( 1 ), y( 0 ), x( 1 ), y( 0 ) };
  sp.layers.push_back( { { { attention_kind::hard, y( 0 ) }, { attention_kind::hard, y( 3 ) } },
                         { select( y( 0 ), gt( y( 3 ), y( 1 ) ), c( 0 ) ), c( 0 ), c( 0 ), c( 0 ) } } );
  sp.validate();
  return sp;
}

struct builtin_options
{
  datatype type = datatype::flt;
  std::string predicate = "parity";
  std::size_t n_max = 10;
};

inline std::vector<std::string> builtin_names()
{
  return { "maj", "maj-ln", "prime-universal", "resource-bounded", "hard-demo" };
}

inline transformer_spec make_builtin( const std::string& name, const builtin_options& o = {} )
{
  auto pred = [&] {
    const auto& preds = standard_predicates();
    auto it = preds.find( o.predicate );
    if ( it == preds.end() )
      throw domain_error( "unknown predicate '" + o.predicate + "'" );
    return it->second;
  };
  if ( name == "maj" )
    return build_majority( o.type );
  if ( name == "maj-ln" )
    return build_majority_layernorm();
  if ( name == "prime-universal" )
    return build_prime_universal( o.predicate, pred(), o.n_max );
  if ( name == "resource-bounded" )
    return build_resource_bounded( o.predicate, pred(), o.type, o.n_max );
  if ( name == "hard-demo" )
    return build_hard_demo();
  throw domain_error( "unknown builtin '" + name + "'" );
}

} // namespace satc
