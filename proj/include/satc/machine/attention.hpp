#pragma once

#include <span>
#include <string>
#include <vector>

#include "../bitnum/size.hpp"
#include "eval.hpp"

namespace satc
{

enum class attention_kind
{
  hard,
  saturated,
  uniform
};

inline const char* to_string( attention_kind k )
{
  switch ( k )
  {
  case attention_kind::hard: return "hard";
  case attention_kind::saturated: return "saturated";
  case attention_kind::uniform: return "uniform";
  }
  return "?";
}

inline attention_kind parse_attention_kind( const std::string& s )
{
  if ( s == "hard" )
    return attention_kind::hard;
  if ( s == "saturated" )
    return attention_kind::saturated;
  if ( s == "uniform" )
    return attention_kind::uniform;
  throw parse_error( "unknown attention kind '" + s + "' (expected hard, saturated or uniform)" );
}

/// Indices (0-based, ascending) attaining the maximum score.
template<class D>
std::vector<std::size_t> max_set( std::span<const D> a )
{
  std::vector<std::size_t> m;
  for ( std::size_t j = 0; j < a.size(); ++j )
  {
    if ( m.empty() || a[j] > a[m[0]] )
      m.assign( 1, j );
    else if ( a[j] == a[m[0]] )
      m.push_back( j );
  }
  return m;
}

/// Attention weights for one query.  UNIFORM and SATURATED divide 1 by the
/// support size with the datatype's division, so over floats the weight is
/// the approximate inverse.
template<class D>
std::vector<D> attend( attention_kind kind, std::span<const D> a )
{
  if ( a.empty() )
    throw domain_error( "attention over an empty score sequence" );
  std::vector<D> w( a.size() );
  if ( kind == attention_kind::uniform )
  {
    const D u = arith<D>::div( D( 1u ), D( static_cast<std::uint64_t>( a.size() ) ) );
    std::fill( w.begin(), w.end(), u );
    return w;
  }
  const auto m = max_set( a );
  if ( kind == attention_kind::hard )
  {
    w[m.front()] = D( 1u );
    return w;
  }
  const D u = arith<D>::div( D( 1u ), D( static_cast<std::uint64_t>( m.size() ) ) );
  for ( auto j : m )
    w[j] = u;
  return w;
}

template<class D>
std::size_t max_component_size( std::span<const D> v )
{
  std::size_t s = 0;
  for ( const auto& x : v )
    s = std::max( s, bit_size( x ) );
  return s;
}

/// Elementwise size preservation of an attention function over sampled score
/// vectors: |alpha(a)_j| against the largest component size of a.
template<class D>
size_profile check_elementwise_size_preserving( attention_kind kind, const std::vector<std::vector<D>>& samples,
                                                const sample_plan& plan = {} )
{
  std::vector<size_sample> out;
  out.reserve( samples.size() );
  for ( const auto& a : samples )
  {
    const auto w = attend<D>( kind, a );
    out.push_back( { max_component_size<D>( a ), max_component_size<D>( w ) } );
  }
  return analyze_size_samples( std::move( out ), plan );
}

} // namespace satc
