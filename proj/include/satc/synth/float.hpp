#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "../bitnum/flt.hpp"
#include "arith.hpp"

namespace satc::synth
{

/// Wire image of a canonical float (-1)^sign p / 2^e.  p has a fixed width;
/// e has bit_width(e_max) wires where e_max bounds the exponent.
struct fpack
{
  gate_id sign = no_wire;
  wires p;
  wires e;
  std::uint64_t e_max = 0;

  std::size_t p_width() const noexcept { return p.size(); }
  std::size_t e_width() const noexcept { return e.size(); }
  std::size_t width() const noexcept { return 1 + p.size() + e.size(); }
};

inline fpack fconst( circuit& c, const flt& v )
{
  return { c.constant( v.negative() ), constant_wires( c, v.num(), v.num().bit_length() ),
           constant_wires( c, v.exp(), bit_width( v.exp() ) ), v.exp() };
}

/// A 0/1 value as a float.
inline fpack from_bit( circuit& c, gate_id b ) { return { c.constant( false ), { b }, {}, 0 }; }

/// Zero-extend or truncate both fields.  Truncation is only exact when the
/// value fits; compile-time width plans rely on that.
inline fpack fresize( circuit& c, fpack x, std::size_t p_width, std::uint64_t e_max )
{
  x.p = resize( c, std::move( x.p ), p_width );
  x.e = resize( c, std::move( x.e ), bit_width( e_max ) );
  x.e_max = e_max;
  return x;
}

/// Bits of a pack in the order sign, p (low first), e (low first).
inline wires flatten( const fpack& x )
{
  wires w{ x.sign };
  w.insert( w.end(), x.p.begin(), x.p.end() );
  w.insert( w.end(), x.e.begin(), x.e.end() );
  return w;
}

inline gate_id nonzero( circuit& c, const fpack& x ) { return any_bit( c, x.p ); }

/// Strip min(trailing zeros of p, e) factors of two; zero becomes +0/2^0.
/// The shift is selected by one AND per (e, t) pair over input literals,
/// then OR-merged.  Depth 4.
inline fpack canonicalize( circuit& c, const fpack& x )
{
  fpack r = x;
  r.sign = c.add_and( { x.sign, nonzero( c, x ) } );
  if ( x.e_max == 0 )
    return r;
  const std::uint64_t top = x.e_max;
  std::vector<wires> by_shift( top + 1 );
  std::vector<wires> e_bits( x.e.size() );
  for ( std::uint64_t k = 0; k <= top; ++k )
  {
    for ( std::uint64_t t = 0; t <= k; ++t )
    {
      wires lits;
      for ( std::size_t i = 0; i < x.e.size(); ++i )
        lits.push_back( ( k >> i ) & 1u ? x.e[i] : c.add_not( x.e[i] ) );
      for ( std::uint64_t i = 0; i < t && i < x.p.size(); ++i )
        lits.push_back( c.add_not( x.p[i] ) );
      if ( t < k )
      {
        if ( t >= x.p.size() )
          continue; // p would need more trailing zeros than it has bits
        lits.push_back( x.p[t] );
      }
      const gate_id sel = c.add_and( lits );
      by_shift[t].push_back( sel );
      for ( std::size_t i = 0; i < x.e.size(); ++i )
        if ( ( ( k - t ) >> i ) & 1u )
          e_bits[i].push_back( sel );
    }
  }
  wires flags;
  std::vector<wires> copies;
  for ( std::uint64_t t = 0; t <= top; ++t )
  {
    flags.push_back( c.add_or( by_shift[t] ) );
    copies.emplace_back( x.p.begin() + std::min<std::size_t>( t, x.p.size() ), x.p.end() );
  }
  r.p = resize( c, select_one( c, flags, copies ), x.p.size() );
  for ( std::size_t i = 0; i < x.e.size(); ++i )
    r.e[i] = c.add_or( e_bits[i] );
  return r;
}

struct aligned
{
  wires e;                   ///< common exponent (the maximum)
  std::uint64_t e_max = 0;   ///< bound on it
  std::vector<wires> p;      ///< numerators scaled to the common exponent
};

/// Scale every numerator to the largest exponent: p_j 2^(E - e_j).
inline aligned align( circuit& c, const std::vector<fpack>& xs )
{
  aligned r;
  for ( const auto& x : xs )
    r.e_max = std::max( r.e_max, x.e_max );
  if ( r.e_max == 0 )
  {
    for ( const auto& x : xs )
      r.p.push_back( x.p );
    return r;
  }
  const std::size_t ew = bit_width( r.e_max );
  std::vector<wires> exps;
  for ( const auto& x : xs )
    exps.push_back( resize( c, x.e, ew ) );
  r.e = xs.size() == 1 ? exps[0] : max_select( c, exps ).value;
  for ( std::size_t j = 0; j < xs.size(); ++j )
  {
    const auto d = resize( c, sub( c, r.e, exps[j] ), ew );
    r.p.push_back( shift_left( c, xs[j].p, d, r.e_max ) );
  }
  return r;
}

/// Exact sum of canonical floats, equal to a fold of flt_add.  Positive and
/// negative numerators are summed separately, the smaller bank is
/// subtracted from the larger, and the result is canonicalized.  Numerator
/// width: max_j |p_j| + e_max + bit_width(n - 1).
inline fpack float_sum( circuit& c, const std::vector<fpack>& xs, sum_policy policy = sum_policy::threshold )
{
  if ( xs.empty() )
    return fconst( c, flt() );
  if ( xs.size() == 1 )
    return xs[0];
  auto al = align( c, xs );
  std::vector<wires> pos, neg;
  for ( std::size_t j = 0; j < xs.size(); ++j )
  {
    pos.push_back( gate_with( c, c.add_not( xs[j].sign ), al.p[j] ) );
    neg.push_back( gate_with( c, xs[j].sign, al.p[j] ) );
  }
  const auto sp = itadd( c, std::move( pos ), policy );
  const auto sn = itadd( c, std::move( neg ), policy );
  const std::size_t w = std::max( sp.size(), sn.size() );
  const gate_id negative = greater( c, sn, sp );
  const auto mag = mux( c, negative, sub( c, sn, sp ), sub( c, sp, sn ) );
  fpack r{ negative, resize( c, mag, w ), al.e, al.e_max };
  return canonicalize( c, r );
}

/// x * y.  Numerator width |p_x| + |p_y|, exponent bound e_max_x + e_max_y.
inline fpack fmul( circuit& c, const fpack& x, const fpack& y, sum_policy policy = sum_policy::threshold )
{
  fpack r;
  r.sign = xor2( c, x.sign, y.sign );
  r.p = resize( c, multiply( c, x.p, y.p, policy ), x.p.size() + y.p.size() );
  r.e_max = x.e_max + y.e_max;
  r.e = resize( c, add( c, x.e, y.e ), bit_width( r.e_max ) );
  return canonicalize( c, r );
}

/// x + k for a constant k on an exponent field.
inline wires add_const( circuit& c, const wires& e, std::uint64_t k, std::uint64_t e_max )
{
  if ( k == 0 )
    return resize( c, e, bit_width( e_max ) );
  return resize( c, add( c, e, constant_wires( c, k, bit_width( k ) ) ), bit_width( e_max ) );
}

/// x * k for a constant float k.
inline fpack fmul_const( circuit& c, const fpack& x, const flt& k )
{
  if ( k.is_zero() )
    return fconst( c, flt() );
  fpack r;
  r.sign = k.negative() ? c.add_not( x.sign ) : x.sign;
  r.p = mul_const( c, x.p, k.num() );
  r.e_max = x.e_max + k.exp();
  r.e = add_const( c, x.e, k.exp(), r.e_max );
  return canonicalize( c, r );
}

/// flt_div(x, y) for a constant nonzero y = p/2^e: numerator
/// floor(2^|p|/p) * 2^e * p_x, exponent |p| + e_x.
inline fpack fdiv_const( circuit& c, const fpack& x, const flt& y )
{
  const unat k = approx_inverse_numerator( y.num() ) << y.exp();
  fpack r;
  r.sign = y.negative() ? c.add_not( x.sign ) : x.sign;
  r.p = mul_const( c, x.p, k );
  r.e_max = x.e_max + y.num().bit_length();
  r.e = add_const( c, x.e, y.num().bit_length(), r.e_max );
  return canonicalize( c, r );
}

/// flt_div(s, m) where m is the index of the set indicator (indicators
/// 1..N; index 0 is ignored).  floor(2^|m|/m) is 2 for powers of two and 1
/// otherwise, so the numerator is p or 2p and the exponent grows by |m|.
inline fpack divide_by_count( circuit& c, const fpack& s, std::span<const gate_id> ind )
{
  const std::size_t top = ind.empty() ? 0 : ind.size() - 1;
  wires pow2_flags;
  std::vector<wires> len_bits( bit_width( top ) );
  for ( std::size_t m = 1; m <= top; ++m )
  {
    if ( std::has_single_bit( m ) )
      pow2_flags.push_back( ind[m] );
    const std::size_t len = bit_width( m );
    for ( std::size_t i = 0; i < len_bits.size(); ++i )
      if ( ( len >> i ) & 1u )
        len_bits[i].push_back( ind[m] );
  }
  const gate_id twice = c.add_or( pow2_flags );
  wires doubled{ c.constant( false ) };
  doubled.insert( doubled.end(), s.p.begin(), s.p.end() );
  fpack r;
  r.sign = s.sign;
  r.p = mux( c, twice, doubled, resize( c, s.p, s.p.size() + 1 ) );
  wires len;
  for ( auto& t : len_bits )
    len.push_back( c.add_or( t ) );
  r.e_max = s.e_max + bit_width( top );
  r.e = resize( c, add( c, s.e, len ), bit_width( r.e_max ) );
  return canonicalize( c, r );
}

struct fcompare_result
{
  gate_id gt = no_wire;
  gate_id eq = no_wire;
};

/// Order of two canonical floats.  Equality is field-wise; for > the
/// magnitudes are aligned and compared, then combined with the signs.
inline fcompare_result fcompare( circuit& c, const fpack& x, const fpack& y )
{
  fcompare_result r;
  const std::size_t ew = std::max( x.e.size(), y.e.size() );
  r.eq = c.add_and( { xnor2( c, x.sign, y.sign ), equal( c, x.p, y.p ), equal( c, resize( c, x.e, ew ), resize( c, y.e, ew ) ) } );
  const auto al = align( c, { x, y } );
  const gate_id mag_gt = greater( c, al.p[0], al.p[1] );
  const gate_id mag_lt = greater( c, al.p[1], al.p[0] );
  const gate_id sx = x.sign, sy = y.sign;
  r.gt = c.add_or( { c.add_and( { c.add_not( sx ), sy } ),
                     c.add_and( { c.add_not( sx ), c.add_not( sy ), mag_gt } ),
                     c.add_and( { sx, sy, mag_lt } ) } );
  return r;
}

inline fpack frelu( circuit& c, const fpack& x )
{
  const gate_id keep = c.add_not( x.sign );
  return { c.constant( false ), gate_with( c, keep, x.p ), gate_with( c, keep, x.e ), x.e_max };
}

inline fpack fneg( circuit& c, const fpack& x )
{
  fpack r = x;
  r.sign = c.add_and( { c.add_not( x.sign ), nonzero( c, x ) } );
  return r;
}

/// s ? a : b with both packs widened to the larger widths.
inline fpack fselect( circuit& c, gate_id s, const fpack& a, const fpack& b )
{
  const std::size_t pw = std::max( a.p.size(), b.p.size() );
  const std::uint64_t em = std::max( a.e_max, b.e_max );
  const auto x = fresize( c, a, pw, em ), y = fresize( c, b, pw, em );
  fpack r;
  r.sign = mux( c, s, { x.sign }, { y.sign } )[0];
  r.p = mux( c, s, x.p, y.p );
  r.e = mux( c, s, x.e, y.e );
  r.e_max = em;
  return r;
}

/// OR over k of (flag_k AND pack_k) with packs widened to common widths;
/// exactly one flag is expected to be set.
inline fpack fselect_one( circuit& c, std::span<const gate_id> flags, const std::vector<fpack>& xs )
{
  std::size_t pw = 0;
  std::uint64_t em = 0;
  for ( const auto& x : xs )
  {
    pw = std::max( pw, x.p.size() );
    em = std::max( em, x.e_max );
  }
  std::vector<wires> signs, ps, es;
  for ( const auto& x : xs )
  {
    const auto y = fresize( c, x, pw, em );
    signs.push_back( { y.sign } );
    ps.push_back( y.p );
    es.push_back( y.e );
  }
  fpack r;
  r.sign = resize( c, select_one( c, flags, signs ), 1 )[0];
  r.p = resize( c, select_one( c, flags, ps ), pw );
  r.e = resize( c, select_one( c, flags, es ), bit_width( em ) );
  r.e_max = em;
  return r;
}

/// The pack zeroed unless g is set.
inline fpack fmask( circuit& c, gate_id g, const fpack& x )
{
  return { c.add_and( { g, x.sign } ), gate_with( c, g, x.p ), gate_with( c, g, x.e ), x.e_max };
}

/// |numerator| as an integer.
inline fpack fnum( circuit& c, const fpack& x ) { return { c.constant( false ), x.p, {}, 0 }; }

/// 2^e as an integer: bit t set iff e = t.
inline fpack fden( circuit& c, const fpack& x )
{
  fpack r{ c.constant( false ), {}, {}, 0 };
  for ( std::uint64_t t = 0; t <= x.e_max; ++t )
    r.p.push_back( equals_const( c, x.e, t ) );
  return r;
}

/// Positive: sign clear and p nonzero.
inline gate_id fpositive( circuit& c, const fpack& x ) { return c.add_and( { c.add_not( x.sign ), nonzero( c, x ) } ); }

} // namespace satc::synth
