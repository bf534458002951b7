#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "circuit.hpp"

namespace satc
{

/// Evaluate every gate on one input vector; returns the output bits.
inline std::vector<bool> eval( const circuit& c, const std::vector<bool>& x )
{
  if ( x.size() != c.num_inputs() )
    throw domain_error( "circuit expects " + std::to_string( c.num_inputs() ) + " inputs, got " + std::to_string( x.size() ) );
  std::vector<char> val( c.num_gates() );
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    const auto& gt = c.at( g );
    const auto in = c.inputs( g );
    switch ( gt.kind )
    {
    case gate_kind::input: val[g] = x[gt.k]; break;
    case gate_kind::neg_input: val[g] = !x[gt.k]; break;
    case gate_kind::constant: val[g] = gt.k != 0; break;
    case gate_kind::and_:
      val[g] = std::all_of( in.begin(), in.end(), [&]( gate_id i ) { return val[i] != 0; } );
      break;
    case gate_kind::or_:
      val[g] = std::any_of( in.begin(), in.end(), [&]( gate_id i ) { return val[i] != 0; } );
      break;
    case gate_kind::not_: val[g] = !val[in[0]]; break;
    case gate_kind::th_ge:
    case gate_kind::th_le:
    {
      std::uint64_t ones = 0;
      for ( auto i : in )
        ones += val[i] != 0;
      val[g] = gt.kind == gate_kind::th_ge ? ones >= gt.k : ones <= gt.k;
      break;
    }
    }
  }
  std::vector<bool> out;
  out.reserve( c.outputs().size() );
  for ( auto o : c.outputs() )
    out.push_back( val[o] != 0 );
  return out;
}

namespace detail
{

/// Lane-wise "popcount of the fan-in >= k" over 64 lanes with a bit-sliced
/// vertical counter.
inline std::uint64_t lanes_at_least( std::span<const gate_id> in, const std::vector<std::uint64_t>& val, std::uint64_t k,
                                     std::vector<std::uint64_t>& planes )
{
  if ( k == 0 )
    return ~std::uint64_t( 0 );
  if ( k > in.size() )
    return 0;
  const std::size_t bits = std::bit_width( in.size() );
  planes.assign( bits, 0 );
  for ( auto i : in )
  {
    std::uint64_t carry = val[i];
    for ( std::size_t b = 0; carry && b < bits; ++b )
    {
      const std::uint64_t t = planes[b] & carry;
      planes[b] ^= carry;
      carry = t;
    }
  }
  std::uint64_t gt = 0, eq = ~std::uint64_t( 0 );
  for ( std::size_t b = bits; b-- > 0; )
  {
    if ( ( k >> b ) & 1 )
      eq &= planes[b];
    else
    {
      gt |= eq & planes[b];
      eq &= ~planes[b];
    }
  }
  return gt | eq;
}

} // namespace detail

/// 64 inputs at once: bit l of x[i] is input i of lane l.  Returns one word
/// per output.
inline std::vector<std::uint64_t> eval_lanes( const circuit& c, std::span<const std::uint64_t> x )
{
  if ( x.size() != c.num_inputs() )
    throw domain_error( "circuit expects " + std::to_string( c.num_inputs() ) + " inputs, got " + std::to_string( x.size() ) );
  std::vector<std::uint64_t> val( c.num_gates() ), planes;
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    const auto& gt = c.at( g );
    const auto in = c.inputs( g );
    std::uint64_t v = 0;
    switch ( gt.kind )
    {
    case gate_kind::input: v = x[gt.k]; break;
    case gate_kind::neg_input: v = ~x[gt.k]; break;
    case gate_kind::constant: v = gt.k ? ~std::uint64_t( 0 ) : 0; break;
    case gate_kind::and_:
      v = ~std::uint64_t( 0 );
      for ( auto i : in )
        v &= val[i];
      break;
    case gate_kind::or_:
      for ( auto i : in )
        v |= val[i];
      break;
    case gate_kind::not_: v = ~val[in[0]]; break;
    case gate_kind::th_ge: v = detail::lanes_at_least( in, val, gt.k, planes ); break;
    case gate_kind::th_le: v = ~detail::lanes_at_least( in, val, gt.k + 1, planes ); break;
    }
    val[g] = v;
  }
  std::vector<std::uint64_t> out;
  for ( auto o : c.outputs() )
    out.push_back( val[o] );
  return out;
}

/// Evaluate many input vectors, 64 per pass.
inline std::vector<std::vector<bool>> eval_batch( const circuit& c, const std::vector<std::vector<bool>>& xs )
{
  std::vector<std::vector<bool>> out( xs.size() );
  for ( std::size_t base = 0; base < xs.size(); base += 64 )
  {
    const std::size_t lanes = std::min<std::size_t>( 64, xs.size() - base );
    std::vector<std::uint64_t> words( c.num_inputs(), 0 );
    for ( std::size_t l = 0; l < lanes; ++l )
    {
      if ( xs[base + l].size() != c.num_inputs() )
        throw domain_error( "circuit input arity mismatch" );
      for ( std::size_t i = 0; i < c.num_inputs(); ++i )
        if ( xs[base + l][i] )
          words[i] |= std::uint64_t( 1 ) << l;
    }
    const auto r = eval_lanes( c, words );
    for ( std::size_t l = 0; l < lanes; ++l )
    {
      out[base + l].resize( r.size() );
      for ( std::size_t o = 0; o < r.size(); ++o )
        out[base + l][o] = ( r[o] >> l ) & 1;
    }
  }
  return out;
}

} // namespace satc
