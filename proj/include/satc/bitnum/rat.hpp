#pragma once

#include <compare>
#include <string>
#include <utility>

#include "unat.hpp"

namespace satc
{

/// red(p, q) = <p / gcd(p, q), q / gcd(p, q)>.
inline std::pair<unat, unat> rat_red( const unat& p, const unat& q )
{
  if ( q.is_zero() )
    throw domain_error( "rational with zero denominator" );
  if ( p.is_zero() )
    return { unat{}, unat{ 1 } };
  const unat g = gcd( p, q );
  return { p / g, q / g };
}

/// Signed rational p/q, always reduced with q > 0.  The sign bit s
/// (value (2s - 1) p / q) is `sign_bit()`; zero is +0/1.
class rat
{
public:
  rat() : q_( 1 ) {}
  rat( std::uint64_t v ) : p_( v ), q_( 1 ) {} // NOLINT
  rat( unat p, unat q, bool negative = false )
  {
    auto [s, t] = rat_red( p, q );
    p_ = std::move( s );
    q_ = std::move( t );
    negative_ = negative && !p_.is_zero();
  }

  static rat integer( std::int64_t v )
  {
    return rat( unat( static_cast<std::uint64_t>( v < 0 ? -v : v ) ), unat( 1 ), v < 0 );
  }

  const unat& num() const noexcept { return p_; }
  const unat& den() const noexcept { return q_; }
  bool negative() const noexcept { return negative_; }
  int sign_bit() const noexcept { return negative_ ? 0 : 1; }
  bool is_zero() const noexcept { return p_.is_zero(); }
  bool is_integer() const noexcept { return q_ == unat( 1 ); }

  friend bool operator==( const rat&, const rat& ) = default;

  friend std::strong_ordering operator<=>( const rat& a, const rat& b )
  {
    if ( a.negative_ != b.negative_ )
      return a.negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
    const auto mag = ( a.p_ * b.q_ ) <=> ( b.p_ * a.q_ );
    return a.negative_ ? 0 <=> mag : mag;
  }

  rat operator-() const
  {
    rat r = *this;
    r.negative_ = !negative_ && !p_.is_zero();
    return r;
  }

  std::string to_string() const
  {
    std::string s = negative_ ? "-" : "";
    s += p_.to_decimal();
    if ( !is_integer() )
      s += "/" + q_.to_decimal();
    return s;
  }

private:
  bool negative_ = false;
  unat p_;
  unat q_;
};

namespace detail
{

/// Signed magnitude sum: (sa, a) + (sb, b) -> (sign, |.|).
inline std::pair<bool, unat> signed_add( bool neg_a, const unat& a, bool neg_b, const unat& b )
{
  if ( neg_a == neg_b )
    return { neg_a, a + b };
  if ( a >= b )
    return { neg_a, a - b };
  return { neg_b, b - a };
}

} // namespace detail

/// r + r' = red(p q' + p' q, q q')
inline rat rat_add( const rat& r, const rat& s )
{
  auto [neg, p] = detail::signed_add( r.negative(), r.num() * s.den(), s.negative(), s.num() * r.den() );
  return rat( std::move( p ), r.den() * s.den(), neg );
}

inline rat rat_sub( const rat& r, const rat& s ) { return rat_add( r, -s ); }

/// r . r' = red(p p', q q')
inline rat rat_mul( const rat& r, const rat& s )
{
  return rat( r.num() * s.num(), r.den() * s.den(), r.negative() != s.negative() );
}

/// Exact division over Q.
inline rat rat_div( const rat& r, const rat& s )
{
  if ( s.is_zero() )
    throw division_by_zero();
  return rat( r.num() * s.den(), r.den() * s.num(), r.negative() != s.negative() );
}

/// Truncated square root of numerator and denominator separately.
inline rat rat_sqrt( const rat& r )
{
  if ( r.negative() )
    throw domain_error( "square root of a negative rational" );
  return rat( isqrt( r.num() ), isqrt( r.den() ) );
}

inline rat operator+( const rat& a, const rat& b ) { return rat_add( a, b ); }
inline rat operator-( const rat& a, const rat& b ) { return rat_sub( a, b ); }
inline rat operator*( const rat& a, const rat& b ) { return rat_mul( a, b ); }
inline rat operator/( const rat& a, const rat& b ) { return rat_div( a, b ); }

} // namespace satc
