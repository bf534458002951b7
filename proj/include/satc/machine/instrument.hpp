#pragma once

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "run.hpp"

namespace satc
{

/// All k^n words of length n, in lexicographic order of token indices.
inline std::vector<std::vector<std::size_t>> enumerate_words( std::size_t k, std::size_t n )
{
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> w( n, 0 );
  while ( true )
  {
    out.push_back( w );
    std::size_t i = n;
    while ( i > 0 && ++w[i - 1] == k )
      w[--i] = 0;
    if ( i == 0 )
      return out;
  }
}

inline std::vector<std::vector<std::size_t>> random_words( std::size_t k, std::size_t n, std::size_t count, std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<std::size_t> d( 0, k - 1 );
  std::vector<std::vector<std::size_t>> out( count, std::vector<std::size_t>( n ) );
  for ( auto& w : out )
    for ( auto& t : w )
      t = d( rng );
  return out;
}

/// size ~ a + b log2 n by least squares; `envelope_a` raises the intercept
/// until every measured point lies on or below the curve.
struct size_fit
{
  double a = 0;
  double b = 0;
  double envelope_a = 0;

  double at( std::size_t n ) const { return envelope_a + b * std::log2( static_cast<double>( n ) ); }
};

inline size_fit fit_log( const std::vector<std::size_t>& ns, const std::vector<std::size_t>& sizes )
{
  size_fit f;
  const double k = static_cast<double>( ns.size() );
  if ( ns.empty() )
    return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for ( std::size_t i = 0; i < ns.size(); ++i )
  {
    const double x = std::log2( static_cast<double>( ns[i] ) ), y = static_cast<double>( sizes[i] );
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / k;
  f.b = var > 1e-12 ? ( sxy - sx * sy / k ) / var : 0.0;
  f.a = ( sy - f.b * sx ) / k;
  double worst = 0;
  for ( std::size_t i = 0; i < ns.size(); ++i )
    worst = std::max( worst, static_cast<double>( sizes[i] ) - ( f.a + f.b * std::log2( static_cast<double>( ns[i] ) ) ) );
  f.envelope_a = f.a + worst;
  return f;
}

struct size_report
{
  std::vector<std::size_t> n_values;
  std::vector<std::vector<std::size_t>> max_sizes; ///< [n index][layer], layer 0 = embedding
  std::vector<size_fit> fits;                      ///< per layer
  std::vector<std::vector<std::size_t>> max_head_sizes; ///< [n index][layer], largest head output; 0 for the embedding
  std::vector<size_fit> head_fits;
  std::size_t samples = 0;
  lin_bits_check lin_bits; ///< aggregated over every head sum (floats only)

  /// Every measured maximum lies on or below its envelope.
  bool within_envelope() const
  {
    for ( std::size_t t = 0; t < n_values.size(); ++t )
      for ( std::size_t l = 0; l < fits.size(); ++l )
        if ( static_cast<double>( max_sizes[t][l] ) > fits[l].at( n_values[t] ) + 1e-9 ||
             static_cast<double>( max_head_sizes[t][l] ) > head_fits[l].at( n_values[t] ) + 1e-9 )
          return false;
    return true;
  }
};

/// Per-layer maximum value size over the sample words for each n, with a
/// logarithmic fit per layer across n.
inline size_report instrument_sizes( const transformer_spec& sp, const std::map<std::size_t, std::vector<std::vector<std::size_t>>>& samples )
{
  size_report r;
  const std::size_t layers = sp.layers.size() + 1;
  for ( const auto& [n, words] : samples )
  {
    if ( words.empty() )
      continue;
    std::vector<std::size_t> mx( layers, 0 ), hx( layers, 0 );
    auto absorb = [&]( const auto& tr ) {
      for ( std::size_t l = 0; l < layers; ++l )
      {
        mx[l] = std::max( mx[l], tr.layers[l].max_value_size );
        for ( const auto& ht : tr.layers[l].heads )
        {
          hx[l] = std::max( hx[l], ht.max_output_size );
          r.lin_bits.merge( ht.lin_bits );
        }
      }
    };
    for ( const auto& w : words )
    {
      const run_options opt{ false };
      if ( sp.type == datatype::flt )
        absorb( run_typed<flt>( sp, w, opt ) );
      else
        absorb( run_typed<rat>( sp, w, opt ) );
      ++r.samples;
    }
    r.n_values.push_back( n );
    r.max_sizes.push_back( mx );
    r.max_head_sizes.push_back( hx );
  }
  for ( std::size_t l = 0; l < layers; ++l )
  {
    std::vector<std::size_t> ys, hs;
    for ( std::size_t t = 0; t < r.n_values.size(); ++t )
    {
      ys.push_back( r.max_sizes[t][l] );
      hs.push_back( r.max_head_sizes[t][l] );
    }
    r.fits.push_back( fit_log( r.n_values, ys ) );
    r.head_fits.push_back( fit_log( r.n_values, hs ) );
  }
  return r;
}

} // namespace satc
