#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "rat.hpp"

namespace satc
{

/// Dyadic rational (-1)^neg p / 2^e.  The denominator is stored as its
/// exponent; canonical form has p odd or e = 0, and zero is +0/2^0.
class flt
{
public:
  flt() = default;
  flt( std::uint64_t v ) : p_( v ) {} // NOLINT
  flt( unat p, std::uint64_t e, bool negative = false ) : negative_( negative ), p_( std::move( p ) ), e_( e )
  {
    canonicalize();
  }

  static flt integer( std::int64_t v )
  {
    return flt( unat( static_cast<std::uint64_t>( v < 0 ? -v : v ) ), 0, v < 0 );
  }

  /// Exact embedding of a rational whose reduced denominator is a power of two.
  static std::optional<flt> from_rat( const rat& r )
  {
    if ( !r.den().is_power_of_two() )
      return std::nullopt;
    return flt( r.num(), r.den().trailing_zeros(), r.negative() );
  }

  rat to_rat() const { return rat( p_, unat::pow2( e_ ), negative_ ); }

  const unat& num() const noexcept { return p_; }
  std::uint64_t exp() const noexcept { return e_; }
  unat den() const { return unat::pow2( e_ ); }
  bool negative() const noexcept { return negative_; }
  int sign_bit() const noexcept { return negative_ ? 0 : 1; }
  bool is_zero() const noexcept { return p_.is_zero(); }

  friend bool operator==( const flt&, const flt& ) = default;

  friend std::strong_ordering operator<=>( const flt& a, const flt& b )
  {
    if ( a.negative_ != b.negative_ )
      return a.negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
    const std::uint64_t e = std::max( a.e_, b.e_ );
    const auto mag = ( a.p_ << ( e - a.e_ ) ) <=> ( b.p_ << ( e - b.e_ ) );
    return a.negative_ ? 0 <=> mag : mag;
  }

  flt operator-() const
  {
    flt r = *this;
    r.negative_ = !negative_ && !p_.is_zero();
    return r;
  }

  /// "p", "-p" or "p/2^e".
  std::string to_string() const
  {
    std::string s = negative_ ? "-" : "";
    s += p_.to_decimal();
    if ( e_ )
      s += "/2^" + std::to_string( e_ );
    return s;
  }

private:
  void canonicalize()
  {
    if ( p_.is_zero() )
    {
      e_ = 0;
      negative_ = false;
      return;
    }
    const std::uint64_t t = std::min<std::uint64_t>( p_.trailing_zeros(), e_ );
    p_ = p_ >> t;
    e_ -= t;
  }

  bool negative_ = false;
  unat p_;
  std::uint64_t e_ = 0;
};

/// Addition as over Q; the denominator stays a power of two.
inline flt flt_add( const flt& x, const flt& y )
{
  const std::uint64_t e = std::max( x.exp(), y.exp() );
  auto [neg, p] = detail::signed_add( x.negative(), x.num() << ( e - x.exp() ), y.negative(), y.num() << ( e - y.exp() ) );
  return flt( std::move( p ), e, neg );
}

inline flt flt_sub( const flt& x, const flt& y ) { return flt_add( x, -y ); }

inline flt flt_mul( const flt& x, const flt& y )
{
  return flt( x.num() * y.num(), x.exp() + y.exp(), x.negative() != y.negative() );
}

/// floor(2^{|p|} / p), the numerator of the approximate inverse of p.
inline unat approx_inverse_numerator( const unat& p )
{
  if ( p.is_zero() )
    throw division_by_zero();
  return unat::pow2( p.bit_length() ) / p;
}

/// x / y through the approximate multiplicative inverse of y = p / 2^e:
/// numerator floor(2^{|p|}/p) * 2^e * num(x), exponent |p| + exp(x).
inline flt flt_div( const flt& x, const flt& y )
{
  if ( y.is_zero() )
    throw division_by_zero();
  const unat k = approx_inverse_numerator( y.num() );
  return flt( ( k * x.num() ) << y.exp(), y.num().bit_length() + x.exp(), x.negative() != y.negative() );
}

/// Truncated square root.  An odd exponent is first made even (p -> 2p,
/// e -> e + 1) so the result stays dyadic; then floor(sqrt(p)) / 2^{e/2}.
inline flt flt_sqrt( const flt& x )
{
  if ( x.negative() )
    throw domain_error( "square root of a negative float" );
  unat p = x.num();
  std::uint64_t e = x.exp();
  if ( e % 2 )
  {
    p = p << 1;
    ++e;
  }
  return flt( isqrt( p ), e / 2 );
}

inline flt operator+( const flt& a, const flt& b ) { return flt_add( a, b ); }
inline flt operator-( const flt& a, const flt& b ) { return flt_sub( a, b ); }
inline flt operator*( const flt& a, const flt& b ) { return flt_mul( a, b ); }
inline flt operator/( const flt& a, const flt& b ) { return flt_div( a, b ); }

} // namespace satc
