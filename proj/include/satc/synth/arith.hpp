#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "../bitnum/unat.hpp"
#include "../circuit/circuit.hpp"

namespace satc::synth
{

// Unsigned numbers are little-endian wire vectors; an empty vector is 0.
// Every gadget adds gates to the caller's circuit and returns the result
// wires.  Depths quoted below are added on top of the inputs' depth and are
// measured with negations pushed to the leaves (NOT is free).

inline constexpr gate_id no_wire = ~gate_id( 0 );

/// How iterated sums are built: `threshold` uses column counting (constant
/// depth); `tree` uses a balanced tree of two-operand adders (no thresholds).
enum class sum_policy
{
  threshold,
  tree
};

inline std::size_t bit_width( std::uint64_t v ) { return static_cast<std::size_t>( std::bit_width( v ) ); }

inline wires constant_wires( circuit& c, const unat& v, std::size_t width )
{
  wires w( width );
  for ( std::size_t i = 0; i < width; ++i )
    w[i] = c.constant( v.bit( i ) );
  return w;
}

inline wires constant_wires( circuit& c, std::uint64_t v, std::size_t width ) { return constant_wires( c, unat( v ), width ); }

/// Zero-extend or truncate to `width`.
inline wires resize( circuit& c, wires w, std::size_t width )
{
  if ( w.size() > width )
    w.resize( width );
  while ( w.size() < width )
    w.push_back( c.constant( false ) );
  return w;
}

inline wires not_all( circuit& c, const wires& w )
{
  wires r;
  r.reserve( w.size() );
  for ( auto g : w )
    r.push_back( c.add_not( g ) );
  return r;
}

/// AND every bit with `g`.
inline wires gate_with( circuit& c, gate_id g, const wires& w )
{
  wires r;
  r.reserve( w.size() );
  for ( auto x : w )
    r.push_back( c.add_and( { g, x } ) );
  return r;
}

inline gate_id any_bit( circuit& c, const wires& w ) { return c.add_or( w ); }

inline gate_id xor2( circuit& c, gate_id a, gate_id b )
{
  return c.add_or( { c.add_and( { a, c.add_not( b ) } ), c.add_and( { c.add_not( a ), b } ) } );
}

inline gate_id xnor2( circuit& c, gate_id a, gate_id b )
{
  return c.add_or( { c.add_and( { a, b } ), c.add_and( { c.add_not( a ), c.add_not( b ) } ) } );
}

/// Output m is 1 iff exactly m inputs are 1 (m = 0..n): th>=m AND th<=m.  Depth 2.
inline wires exact_count( circuit& c, std::span<const gate_id> xs )
{
  wires out;
  out.reserve( xs.size() + 1 );
  for ( std::size_t m = 0; m <= xs.size(); ++m )
    out.push_back( c.add_and( { c.add_threshold_ge( m, xs ), c.add_threshold_le( m, xs ) } ) );
  return out;
}

/// Binary population count, bit_width(n) outputs.  Bit b is the OR of the
/// count intervals on which it is set, each interval an AND of two
/// thresholds.  Depth 3.
inline wires count_bits( circuit& c, std::span<const gate_id> xs )
{
  const std::size_t n = xs.size();
  const std::size_t width = bit_width( n );
  std::vector<gate_id> ge( n + 2, no_wire ), le( n + 1, no_wire );
  auto at_least = [&]( std::size_t m ) {
    if ( ge[m] == no_wire )
      ge[m] = c.add_threshold_ge( m, xs );
    return ge[m];
  };
  auto at_most = [&]( std::size_t m ) {
    if ( le[m] == no_wire )
      le[m] = c.add_threshold_le( m, xs );
    return le[m];
  };
  wires out( width );
  for ( std::size_t b = 0; b < width; ++b )
  {
    const std::size_t run = std::size_t( 1 ) << b;
    wires terms;
    for ( std::size_t lo = run; lo <= n; lo += 2 * run )
    {
      const std::size_t hi = std::min( n, lo + run - 1 );
      terms.push_back( c.add_and( { at_least( lo ), at_most( hi ) } ) );
    }
    out[b] = c.add_or( terms );
  }
  return out;
}

/// a + b (+ cin) by carry lookahead; width max(|a|, |b|, 2) + 1.  Sum bits
/// are flattened two-level expressions over generate/propagate terms, so the
/// depth is 4 for every width.  No thresholds.
inline wires add( circuit& c, wires a, wires b, gate_id cin = no_wire )
{
  const std::size_t w = std::max<std::size_t>( { a.size(), b.size(), 2 } );
  a = resize( c, std::move( a ), w );
  b = resize( c, std::move( b ), w );
  wires g( w ), p( w );
  for ( std::size_t k = 0; k < w; ++k )
  {
    g[k] = c.add_and( { a[k], b[k] } );
    p[k] = c.add_or( { a[k], b[k] } );
  }
  // carry terms into position j: C[k] = g_k AND p_{k+1..j-1}; the carry-in acts as g_{-1}
  auto carry_terms = [&]( std::size_t j ) {
    std::vector<wires> lits;
    if ( cin != no_wire )
    {
      wires t{ cin };
      t.insert( t.end(), p.begin(), p.begin() + j );
      lits.push_back( std::move( t ) );
    }
    for ( std::size_t k = 0; k < j; ++k )
    {
      wires t{ g[k] };
      t.insert( t.end(), p.begin() + k + 1, p.begin() + j );
      lits.push_back( std::move( t ) );
    }
    return lits;
  };
  wires out( w + 1 );
  for ( std::size_t j = 0; j <= w; ++j )
  {
    const auto lits = carry_terms( j );
    wires cterms;
    for ( const auto& t : lits )
      cterms.push_back( c.add_and( t ) );
    if ( j == w )
    {
      out[j] = c.add_or( cterms );
      break;
    }
    // sum_j = (t_j AND NOT carry) OR (NOT t_j AND carry), t_j = p_j AND NOT g_j
    wires keep{ p[j], c.add_not( g[j] ) };
    for ( auto ct : cterms )
      keep.push_back( c.add_not( ct ) );
    wires terms{ c.add_and( keep ) };
    const gate_id not_t = c.add_or( { c.add_not( p[j] ), g[j] } );
    for ( const auto& t : lits )
    {
      wires flip{ not_t };
      flip.insert( flip.end(), t.begin(), t.end() );
      terms.push_back( c.add_and( flip ) );
    }
    out[j] = c.add_or( terms );
  }
  return out;
}

/// a - b modulo 2^max(|a|, |b|, 2), as a + not(b) + 1.
inline wires sub( circuit& c, wires a, wires b )
{
  const std::size_t w = std::max<std::size_t>( { a.size(), b.size(), 2 } );
  a = resize( c, std::move( a ), w );
  b = resize( c, std::move( b ), w );
  auto r = add( c, std::move( a ), not_all( c, b ), c.constant( true ) );
  r.resize( w );
  return r;
}

namespace detail
{

/// Shared pieces of a magnitude comparison: per-bit equality and the
/// "first difference favours a" terms.  Widths padded to at least 2.
struct compare_parts
{
  wires eq;
  wires gt_terms;
};

inline compare_parts compare_terms( circuit& c, wires a, wires b )
{
  const std::size_t w = std::max<std::size_t>( { a.size(), b.size(), 2 } );
  a = resize( c, std::move( a ), w );
  b = resize( c, std::move( b ), w );
  compare_parts r;
  r.eq.resize( w );
  for ( std::size_t i = 0; i < w; ++i )
    r.eq[i] = xnor2( c, a[i], b[i] );
  for ( std::size_t k = 0; k < w; ++k )
  {
    wires t{ a[k], c.add_not( b[k] ) };
    t.insert( t.end(), r.eq.begin() + k + 1, r.eq.end() );
    r.gt_terms.push_back( c.add_and( t ) );
  }
  return r;
}

} // namespace detail

/// a > b.  Depth 4, no thresholds.
inline gate_id greater( circuit& c, const wires& a, const wires& b )
{
  return c.add_or( detail::compare_terms( c, a, b ).gt_terms );
}

/// a >= b.  Depth 4, no thresholds.
inline gate_id greater_equal( circuit& c, const wires& a, const wires& b )
{
  auto parts = detail::compare_terms( c, a, b );
  parts.gt_terms.push_back( c.add_and( parts.eq ) );
  return c.add_or( parts.gt_terms );
}

/// a == b.  Depth 3.
inline gate_id equal( circuit& c, const wires& a, const wires& b )
{
  const std::size_t w = std::max( a.size(), b.size() );
  const auto x = resize( c, a, w ), y = resize( c, b, w );
  wires eq( w );
  for ( std::size_t i = 0; i < w; ++i )
    eq[i] = xnor2( c, x[i], y[i] );
  return c.add_and( eq );
}

/// a == v for a constant v.  Depth 1.
inline gate_id equals_const( circuit& c, const wires& a, std::uint64_t v )
{
  if ( bit_width( v ) > a.size() )
    return c.constant( false );
  wires lits( a.size() );
  for ( std::size_t i = 0; i < a.size(); ++i )
    lits[i] = ( v >> i ) & 1u ? a[i] : c.add_not( a[i] );
  return c.add_and( lits );
}

/// OR over k of (flag_k AND value_k), bitwise; at most one flag is expected
/// to be set.  Depth 2.
inline wires select_one( circuit& c, std::span<const gate_id> flags, const std::vector<wires>& values )
{
  std::size_t w = 0;
  for ( const auto& v : values )
    w = std::max( w, v.size() );
  wires out( w );
  for ( std::size_t b = 0; b < w; ++b )
  {
    wires terms;
    for ( std::size_t k = 0; k < values.size(); ++k )
      if ( b < values[k].size() )
        terms.push_back( c.add_and( { flags[k], values[k][b] } ) );
    out[b] = c.add_or( terms );
  }
  return out;
}

/// s ? a : b, bitwise.
inline wires mux( circuit& c, gate_id s, const wires& a, const wires& b )
{
  const gate_id flags[2] = { s, c.add_not( s ) };
  return select_one( c, flags, { a, b } );
}

/// x * 2^s for a shift amount s <= max_shift given in binary; width
/// |x| + max_shift.  Selects among pre-shifted copies.  Depth 3.
inline wires shift_left( circuit& c, const wires& x, const wires& s, std::uint64_t max_shift )
{
  std::vector<wires> copies;
  wires flags;
  for ( std::uint64_t t = 0; t <= max_shift; ++t )
  {
    wires v( t, c.constant( false ) );
    v.insert( v.end(), x.begin(), x.end() );
    copies.push_back( std::move( v ) );
    flags.push_back( equals_const( c, s, t ) );
  }
  return resize( c, select_one( c, flags, copies ), x.size() + max_shift );
}

/// floor(x / 2^s) for s <= max_shift; width |x|.  Depth 3.
inline wires shift_right( circuit& c, const wires& x, const wires& s, std::uint64_t max_shift )
{
  std::vector<wires> copies;
  wires flags;
  for ( std::uint64_t t = 0; t <= max_shift; ++t )
  {
    copies.emplace_back( x.begin() + std::min<std::size_t>( t, x.size() ), x.end() );
    flags.push_back( equals_const( c, s, t ) );
  }
  return resize( c, select_one( c, flags, copies ), x.size() );
}

struct max_result
{
  wires value;   ///< the maximum
  wires first;   ///< one-hot: first index holding the maximum
  wires maximal; ///< every index holding the maximum
};

/// All-pairs comparison.  first_j = v_j > v_k for k < j and v_j >= v_k for
/// k > j; maximal_j = v_j >= v_k for all k.  Depth 5 for the flags, 7 for
/// the value.  No thresholds.
inline max_result max_select( circuit& c, const std::vector<wires>& v )
{
  const std::size_t n = v.size();
  max_result r;
  if ( n == 0 )
    return r;
  std::vector<std::vector<gate_id>> ge( n, std::vector<gate_id>( n, no_wire ) );
  for ( std::size_t j = 0; j < n; ++j )
    for ( std::size_t k = 0; k < n; ++k )
      if ( j != k )
        ge[j][k] = greater_equal( c, v[j], v[k] );
  for ( std::size_t j = 0; j < n; ++j )
  {
    wires first, all;
    for ( std::size_t k = 0; k < n; ++k )
    {
      if ( k == j )
        continue;
      all.push_back( ge[j][k] );
      first.push_back( k < j ? c.add_not( ge[k][j] ) : ge[j][k] );
    }
    r.first.push_back( c.add_and( first ) );
    r.maximal.push_back( c.add_and( all ) );
  }
  r.value = select_one( c, r.first, v );
  return r;
}

namespace detail
{

/// One column-count round: every column is popcounted; counts whose
/// positions agree modulo L (L = widest count) occupy disjoint bit ranges
/// and are concatenated into one summand.  Returns L summands.
inline std::vector<wires> reduce_round( circuit& c, const std::vector<wires>& nums )
{
  std::size_t width = 0;
  for ( const auto& x : nums )
    width = std::max( width, x.size() );
  std::vector<wires> counts( width );
  std::size_t l = 1;
  for ( std::size_t p = 0; p < width; ++p )
  {
    wires col;
    for ( const auto& x : nums )
      if ( p < x.size() )
        col.push_back( x[p] );
    counts[p] = count_bits( c, col );
    l = std::max( l, counts[p].size() );
  }
  std::vector<wires> out( l, wires( width + l, c.constant( false ) ) );
  for ( std::size_t p = 0; p < width; ++p )
    for ( std::size_t b = 0; b < counts[p].size(); ++b )
      out[p % l][p + b] = counts[p][b];
  return out;
}

inline wires adder_tree( circuit& c, std::vector<wires> nums )
{
  if ( nums.empty() )
    return {};
  while ( nums.size() > 1 )
  {
    std::vector<wires> next;
    for ( std::size_t i = 0; i + 1 < nums.size(); i += 2 )
      next.push_back( add( c, nums[i], nums[i + 1] ) );
    if ( nums.size() % 2 )
      next.push_back( std::move( nums.back() ) );
    nums = std::move( next );
  }
  return nums[0];
}

} // namespace detail

/// Number of column-count rounds in a threshold iterated sum.
inline constexpr std::size_t itadd_rounds = 2;
/// Summands left for the final adder tree.
inline constexpr std::size_t itadd_tail = 4;

/// Sum of unsigned numbers.  With the threshold policy and more than two
/// summands: exactly two column-count rounds, then a fixed two-level tree of
/// four adders (padding summands are zero), so the depth is 3 + 3 + 4 + 4
/// whatever the count, as long as two rounds reach four summands (fewer
/// than 2^15 summands).  Beyond that, extra rounds keep the result exact.
inline wires itadd( circuit& c, std::vector<wires> nums, sum_policy policy = sum_policy::threshold )
{
  std::size_t width = 0;
  for ( const auto& x : nums )
    width = std::max( width, x.size() );
  const std::size_t out_width = width + bit_width( nums.size() > 1 ? nums.size() - 1 : 0 );
  if ( nums.empty() )
    return {};
  if ( nums.size() == 1 )
    return nums[0];
  wires r;
  if ( policy == sum_policy::tree || nums.size() == 2 )
  {
    r = detail::adder_tree( c, std::move( nums ) );
  }
  else
  {
    for ( std::size_t round = 0; round < itadd_rounds || nums.size() > itadd_tail; ++round )
      nums = detail::reduce_round( c, nums );
    // the tail keeps padding adders as real gates so its depth never depends on the count
    fold_guard guard( c, fold_mode::none );
    nums.resize( itadd_tail );
    r = add( c, add( c, nums[0], nums[1] ), add( c, nums[2], nums[3] ) );
  }
  return resize( c, std::move( r ), out_width );
}

/// a * b through |b| AND-gated shifted copies of a and an iterated sum.
inline wires multiply( circuit& c, const wires& a, const wires& b, sum_policy policy = sum_policy::threshold )
{
  if ( a.empty() || b.empty() )
    return {};
  std::vector<wires> parts;
  for ( std::size_t k = 0; k < b.size(); ++k )
  {
    wires v( k, c.constant( false ) );
    const auto g = gate_with( c, b[k], a );
    v.insert( v.end(), g.begin(), g.end() );
    parts.push_back( std::move( v ) );
  }
  return resize( c, itadd( c, std::move( parts ), policy ), a.size() + b.size() );
}

/// a * k for a constant k: shifted copies of a for the set bits of k,
/// summed by an adder tree (no thresholds).  Width |a| + bit_length(k).
inline wires mul_const( circuit& c, const wires& a, const unat& k )
{
  if ( k.is_zero() || a.empty() )
    return {};
  std::vector<wires> parts;
  for ( std::size_t i = 0; i < k.bit_length(); ++i )
  {
    if ( !k.bit( i ) )
      continue;
    wires v( i, c.constant( false ) );
    v.insert( v.end(), a.begin(), a.end() );
    parts.push_back( std::move( v ) );
  }
  return resize( c, detail::adder_tree( c, std::move( parts ) ), a.size() + k.bit_length() );
}

} // namespace satc::synth
