#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../circuit/metrics.hpp"
#include "arith.hpp"
#include "float.hpp"
#include "lookup.hpp"

namespace satc::synth
{

// Standalone gadget circuits.  Inputs are laid out operand after operand,
// each little-endian; float operands as sign, p bits, e bits.  Depth is
// reported with negations at the leaves.

struct manifest
{
  std::string name;
  std::map<std::string, std::uint64_t> params;
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t thresholds = 0;

  nlohmann::json to_json() const
  {
    return { { "name", name }, { "params", params }, { "size", size }, { "depth", depth }, { "threshold_count", thresholds } };
  }
};

/// Metrics of the leaf-negation normal form, the convention for all
/// depth figures in this library.
inline metrics normalized_metrics( const circuit& c ) { return measure( to_leaf_negation( c ) ); }

inline manifest describe( std::string name, std::map<std::string, std::uint64_t> params, const circuit& c )
{
  const auto m = normalized_metrics( c );
  return { std::move( name ), std::move( params ), m.size, m.depth, m.thresholds };
}

namespace detail
{

inline wires take( const circuit& c, std::size_t& next, std::size_t k )
{
  wires w;
  for ( std::size_t i = 0; i < k; ++i )
    w.push_back( c.input( next++ ) );
  return w;
}

inline fpack take_float( const circuit& c, std::size_t& next, std::size_t p_width, std::uint64_t e_max )
{
  fpack x;
  x.sign = c.input( next++ );
  x.p = take( c, next, p_width );
  x.e = take( c, next, bit_width( e_max ) );
  x.e_max = e_max;
  return x;
}

inline void set_float_output( circuit& c, const fpack& x )
{
  c.set_outputs( flatten( x ) );
}

} // namespace detail

inline std::size_t float_input_width( std::size_t p_width, std::uint64_t e_max ) { return 1 + p_width + bit_width( e_max ); }

/// n inputs; n + 1 one-hot outputs.
inline circuit exact_count_circuit( std::size_t n )
{
  circuit c( n );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  c.set_outputs( exact_count( c, detail::take( c, next, n ) ) );
  return c;
}

inline circuit count_bits_circuit( std::size_t n )
{
  circuit c( n );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  c.set_outputs( count_bits( c, detail::take( c, next, n ) ) );
  return c;
}

/// a, b (B bits each); a + b in max(B, 2) + 1 bits.
inline circuit adder_circuit( std::size_t b )
{
  circuit c( 2 * b );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  const auto x = detail::take( c, next, b );
  const auto y = detail::take( c, next, b );
  c.set_outputs( add( c, x, y ) );
  return c;
}

/// a, b; outputs a >= b, a > b, a == b.
inline circuit comparator_circuit( std::size_t b )
{
  circuit c( 2 * b );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  const auto x = detail::take( c, next, b );
  const auto y = detail::take( c, next, b );
  c.set_outputs( { greater_equal( c, x, y ), greater( c, x, y ), equal( c, x, y ) }, { "ge", "gt", "eq" } );
  return c;
}

/// n values of B bits; outputs the maximum (B bits) then n first-winner flags.
inline circuit max_select_circuit( std::size_t n, std::size_t b )
{
  circuit c( n * b );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  std::vector<wires> v;
  for ( std::size_t j = 0; j < n; ++j )
    v.push_back( detail::take( c, next, b ) );
  const auto r = max_select( c, v );
  auto outs = resize( c, r.value, b );
  outs.insert( outs.end(), r.first.begin(), r.first.end() );
  c.set_outputs( outs );
  return c;
}

/// n numbers of B bits; the sum in B + bit_width(n - 1) bits.
inline circuit itadd_circuit( std::size_t n, std::size_t b, sum_policy policy = sum_policy::threshold )
{
  circuit c( n * b );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  std::vector<wires> v;
  for ( std::size_t j = 0; j < n; ++j )
    v.push_back( detail::take( c, next, b ) );
  c.set_outputs( itadd( c, v, policy ) );
  return c;
}

/// a, b (B bits each); the 2B-bit product.
inline circuit multiplier_circuit( std::size_t b, sum_policy policy = sum_policy::threshold )
{
  circuit c( 2 * b );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  const auto x = detail::take( c, next, b );
  const auto y = detail::take( c, next, b );
  c.set_outputs( multiply( c, x, y, policy ) );
  return c;
}

/// x (B bits), s (bit_width(max_shift) bits); x * 2^s in B + max_shift bits.
inline circuit barrel_shift_circuit( std::size_t b, std::uint64_t max_shift )
{
  circuit c( b + bit_width( max_shift ) );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  const auto x = detail::take( c, next, b );
  const auto s = detail::take( c, next, bit_width( max_shift ) );
  c.set_outputs( shift_left( c, x, s, max_shift ) );
  return c;
}

/// n canonical floats with p_width-bit numerators and exponents <= e_max;
/// the canonical sum.
inline circuit float_sum_circuit( std::size_t n, std::size_t p_width, std::uint64_t e_max, sum_policy policy = sum_policy::threshold )
{
  circuit c( n * float_input_width( p_width, e_max ) );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  std::vector<fpack> xs;
  for ( std::size_t j = 0; j < n; ++j )
    xs.push_back( detail::take_float( c, next, p_width, e_max ) );
  detail::set_float_output( c, float_sum( c, xs, policy ) );
  return c;
}

/// A canonical float s, then n count indicators for m = 1..n (exactly one
/// set); flt_div(s, m).
inline circuit divide_by_count_circuit( std::size_t p_width, std::uint64_t e_max, std::size_t n )
{
  circuit c( float_input_width( p_width, e_max ) + n );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  const auto s = detail::take_float( c, next, p_width, e_max );
  wires ind{ c.constant( false ) };
  const auto rest = detail::take( c, next, n );
  ind.insert( ind.end(), rest.begin(), rest.end() );
  detail::set_float_output( c, divide_by_count( c, s, ind ) );
  return c;
}

/// Manifests for a representative set of gadget instances.
inline std::vector<manifest> gadget_manifests( std::size_t n, std::size_t b )
{
  std::vector<manifest> out;
  out.push_back( describe( "exact_count", { { "n", n } }, exact_count_circuit( n ) ) );
  out.push_back( describe( "count_bits", { { "n", n } }, count_bits_circuit( n ) ) );
  out.push_back( describe( "adder2", { { "B", b } }, adder_circuit( b ) ) );
  out.push_back( describe( "comparator", { { "B", b } }, comparator_circuit( b ) ) );
  out.push_back( describe( "max_select", { { "n", n }, { "B", b } }, max_select_circuit( n, b ) ) );
  out.push_back( describe( "itadd", { { "n", n }, { "B", b } }, itadd_circuit( n, b ) ) );
  out.push_back( describe( "tc0_multiplier", { { "B", b } }, multiplier_circuit( b ) ) );
  out.push_back( describe( "barrel_shift", { { "B", b }, { "max_shift", b } }, barrel_shift_circuit( b, b ) ) );
  out.push_back( describe( "float_sum", { { "n", n }, { "p_width", b }, { "e_max", 3 } }, float_sum_circuit( n, b, 3 ) ) );
  out.push_back( describe( "divide_by_count", { { "n", n }, { "p_width", b }, { "e_max", 3 } }, divide_by_count_circuit( b, 3, n ) ) );
  return out;
}

} // namespace satc::synth
