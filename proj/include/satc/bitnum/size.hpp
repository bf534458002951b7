#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "flt.hpp"

namespace satc
{

// Size in bits.  A rational or float is charged 2 max(|p|, |q|) + 1: p and q
// padded to equal length and interleaved, plus the sign bit.  A float's
// denominator is measured as the binary integer 2^e, i.e. e + 1 bits.

inline std::size_t bit_size( const bit_string& x ) { return x.size(); }
inline std::size_t bit_size( const unat& x ) { return x.bit_length(); }
inline std::size_t bit_size( bool ) { return 1; }

inline std::size_t bit_size( const rat& r )
{
  return 2 * std::max( r.num().bit_length(), r.den().bit_length() ) + 1;
}

inline std::size_t bit_size( const flt& x )
{
  return 2 * std::max<std::size_t>( x.num().bit_length(), x.exp() + 1 ) + 1;
}

/// Tuples are stored component-wise; their size is the sum of the parts.
template<class A, class B>
std::size_t bit_size( const std::pair<A, B>& t )
{
  return bit_size( t.first ) + bit_size( t.second );
}

template<class T>
std::size_t bit_size( const std::vector<T>& v )
{
  std::size_t s = 0;
  for ( const auto& x : v )
    s += bit_size( x );
  return s;
}

struct size_sample
{
  std::size_t input_size = 0;
  std::size_t output_size = 0;
};

/// How to judge a sampled function: bound |f(x)| <= c |x| must hold with
/// c <= c_max for every sample with |x| >= n0.
struct sample_plan
{
  std::size_t n0 = 8;
  std::size_t c_max = 4;
};

struct size_profile
{
  std::vector<size_sample> samples;
  std::size_t c = 0;  ///< smallest integer c satisfying all samples with |x| >= n0
  std::size_t n0 = 0;
  std::size_t c_max = 0;
  bool passes = false;
  std::vector<size_sample> violations; ///< samples with |f(x)| > c_max |x|
};

inline size_profile analyze_size_samples( std::vector<size_sample> samples, const sample_plan& plan = {} )
{
  size_profile prof;
  prof.n0 = plan.n0;
  prof.c_max = plan.c_max;
  bool any = false;
  for ( const auto& s : samples )
  {
    if ( s.input_size < plan.n0 || s.input_size == 0 )
      continue;
    any = true;
    prof.c = std::max( prof.c, ( s.output_size + s.input_size - 1 ) / s.input_size );
    if ( s.output_size > plan.c_max * s.input_size )
      prof.violations.push_back( s );
  }
  prof.samples = std::move( samples );
  prof.passes = any && prof.violations.empty();
  return prof;
}

/// Measure (|x|, |f(x)|) over `inputs` and fit the size-preservation constant.
/// A violation is a reported outcome, not an error.
template<class In, class F>
size_profile check_size_preserving( const std::vector<In>& inputs, F&& f, const sample_plan& plan = {} )
{
  std::vector<size_sample> samples;
  samples.reserve( inputs.size() );
  for ( const auto& x : inputs )
    samples.push_back( { bit_size( x ), bit_size( f( x ) ) } );
  return analyze_size_samples( std::move( samples ), plan );
}

} // namespace satc
