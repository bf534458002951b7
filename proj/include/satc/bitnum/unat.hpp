#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "../error.hpp"

namespace satc
{

/// A raw binary string x_1 ... x_n.  Leading and trailing zeros are kept, so
/// `size()` is the exact length charged by the size measure.
class bit_string
{
public:
  bit_string() = default;
  explicit bit_string( std::vector<bool> bits ) : bits_( std::move( bits ) ) {}

  /// Parse "0"/"1" characters, first character is x_1.
  static bit_string from_string( std::string_view s )
  {
    std::vector<bool> bits;
    bits.reserve( s.size() );
    for ( char c : s )
    {
      if ( c != '0' && c != '1' )
        throw parse_error( std::string( "invalid bit '" ) + c + "' in bit string" );
      bits.push_back( c == '1' );
    }
    return bit_string( std::move( bits ) );
  }

  std::string to_string() const
  {
    std::string s;
    s.reserve( bits_.size() );
    for ( bool b : bits_ )
      s.push_back( b ? '1' : '0' );
    return s;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  /// 1-based access, x_i.
  bool at( std::size_t i ) const { return bits_.at( i - 1 ); }
  bool operator[]( std::size_t zero_based ) const { return bits_[zero_based]; }
  void push_back( bool b ) { bits_.push_back( b ); }

  const std::vector<bool>& bits() const noexcept { return bits_; }

  bool operator==( const bit_string& ) const = default;

private:
  std::vector<bool> bits_;
};

/// Unsigned integer with value sum_i 2^{i-1} x_i.  Stored as normalized
/// little-endian 32-bit limbs; the bit view is always the minimal string.
class unat
{
public:
  unat() = default;
  unat( std::uint64_t v ) // NOLINT: implicit by design of literal arithmetic
  {
    while ( v )
    {
      limbs_.push_back( static_cast<std::uint32_t>( v ) );
      v >>= 32;
    }
  }

  /// Little-endian interpretation: bit i (1-based) has weight 2^{i-1}.
  static unat from_bits( const bit_string& x )
  {
    unat r;
    for ( std::size_t i = 0; i < x.size(); ++i )
      if ( x[i] )
        r.set_bit( i );
    return r;
  }

  /// Most-significant-bit-first digits, e.g. "101" = 5.
  static unat from_binary( std::string_view s )
  {
    if ( s.empty() )
      throw parse_error( "empty binary literal" );
    unat r;
    const std::size_t n = s.size();
    for ( std::size_t k = 0; k < n; ++k )
    {
      const char c = s[n - 1 - k];
      if ( c != '0' && c != '1' )
        throw parse_error( std::string( "invalid binary digit '" ) + c + "'" );
      if ( c == '1' )
        r.set_bit( k );
    }
    return r;
  }

  static unat from_decimal( std::string_view s )
  {
    if ( s.empty() )
      throw parse_error( "empty decimal literal" );
    unat r;
    for ( char c : s )
    {
      if ( c < '0' || c > '9' )
        throw parse_error( std::string( "invalid decimal digit '" ) + c + "'" );
      r.mul_small_add( 10, static_cast<std::uint32_t>( c - '0' ) );
    }
    return r;
  }

  static unat pow2( std::size_t k )
  {
    unat r;
    r.set_bit( k );
    return r;
  }

  std::size_t bit_length() const noexcept
  {
    if ( limbs_.empty() )
      return 0;
    return ( limbs_.size() - 1 ) * 32 + ( 32 - std::countl_zero( limbs_.back() ) );
  }

  bool bit( std::size_t i ) const noexcept
  {
    const std::size_t l = i / 32;
    return l < limbs_.size() && ( ( limbs_[l] >> ( i % 32 ) ) & 1u );
  }

  void set_bit( std::size_t i )
  {
    const std::size_t l = i / 32;
    if ( l >= limbs_.size() )
      limbs_.resize( l + 1, 0 );
    limbs_[l] |= 1u << ( i % 32 );
  }

  bool is_zero() const noexcept { return limbs_.empty(); }
  bool is_odd() const noexcept { return !limbs_.empty() && ( limbs_[0] & 1u ); }

  /// Number of trailing zero bits; 0 for zero.
  std::size_t trailing_zeros() const noexcept
  {
    for ( std::size_t l = 0; l < limbs_.size(); ++l )
      if ( limbs_[l] )
        return l * 32 + std::countr_zero( limbs_[l] );
    return 0;
  }

  bool is_power_of_two() const noexcept { return !is_zero() && trailing_zeros() + 1 == bit_length(); }

  bool fits_u64() const noexcept { return limbs_.size() <= 2; }

  std::uint64_t to_u64() const
  {
    if ( !fits_u64() )
      throw domain_error( "unsigned integer does not fit in 64 bits" );
    std::uint64_t v = 0;
    for ( std::size_t l = limbs_.size(); l-- > 0; )
      v = ( v << 32 ) | limbs_[l];
    return v;
  }

  /// Minimal little-endian bit string (empty for zero).
  bit_string to_bits() const
  {
    std::vector<bool> bits( bit_length() );
    for ( std::size_t i = 0; i < bits.size(); ++i )
      bits[i] = bit( i );
    return bit_string( std::move( bits ) );
  }

  /// Most-significant-bit-first, "0" for zero.
  std::string to_binary() const
  {
    if ( is_zero() )
      return "0";
    std::string s;
    for ( std::size_t i = bit_length(); i-- > 0; )
      s.push_back( bit( i ) ? '1' : '0' );
    return s;
  }

  std::string to_decimal() const
  {
    if ( is_zero() )
      return "0";
    unat t = *this;
    std::string s;
    while ( !t.is_zero() )
    {
      std::uint32_t rem = t.div_small( 1000000000u );
      for ( int k = 0; k < 9; ++k )
      {
        s.push_back( static_cast<char>( '0' + rem % 10 ) );
        rem /= 10;
        if ( t.is_zero() && rem == 0 )
          break;
      }
    }
    while ( s.size() > 1 && s.back() == '0' )
      s.pop_back();
    std::reverse( s.begin(), s.end() );
    return s;
  }

  const std::vector<std::uint32_t>& limbs() const noexcept { return limbs_; }

  friend bool operator==( const unat&, const unat& ) = default;

  friend std::strong_ordering operator<=>( const unat& a, const unat& b ) noexcept
  {
    if ( a.limbs_.size() != b.limbs_.size() )
      return a.limbs_.size() <=> b.limbs_.size();
    for ( std::size_t l = a.limbs_.size(); l-- > 0; )
      if ( a.limbs_[l] != b.limbs_[l] )
        return a.limbs_[l] <=> b.limbs_[l];
    return std::strong_ordering::equal;
  }

  friend unat operator+( const unat& a, const unat& b )
  {
    const auto& big = a.limbs_.size() >= b.limbs_.size() ? a : b;
    const auto& small = a.limbs_.size() >= b.limbs_.size() ? b : a;
    unat r;
    r.limbs_.resize( big.limbs_.size() + 1, 0 );
    std::uint64_t carry = 0;
    for ( std::size_t l = 0; l < big.limbs_.size(); ++l )
    {
      std::uint64_t s = carry + big.limbs_[l] + ( l < small.limbs_.size() ? small.limbs_[l] : 0u );
      r.limbs_[l] = static_cast<std::uint32_t>( s );
      carry = s >> 32;
    }
    r.limbs_.back() = static_cast<std::uint32_t>( carry );
    r.normalize();
    return r;
  }

  /// a - b; requires a >= b.
  friend unat operator-( const unat& a, const unat& b )
  {
    if ( a < b )
      throw domain_error( "unsigned subtraction underflow" );
    unat r = a;
    std::int64_t borrow = 0;
    for ( std::size_t l = 0; l < r.limbs_.size(); ++l )
    {
      std::int64_t d = static_cast<std::int64_t>( r.limbs_[l] ) - borrow - ( l < b.limbs_.size() ? b.limbs_[l] : 0u );
      borrow = d < 0;
      r.limbs_[l] = static_cast<std::uint32_t>( d + ( borrow << 32 ) );
    }
    r.normalize();
    return r;
  }

  friend unat operator*( const unat& a, const unat& b )
  {
    if ( a.is_zero() || b.is_zero() )
      return {};
    unat r;
    r.limbs_.assign( a.limbs_.size() + b.limbs_.size(), 0 );
    for ( std::size_t i = 0; i < a.limbs_.size(); ++i )
    {
      std::uint64_t carry = 0;
      for ( std::size_t j = 0; j < b.limbs_.size(); ++j )
      {
        std::uint64_t t = static_cast<std::uint64_t>( a.limbs_[i] ) * b.limbs_[j] + r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>( t );
        carry = t >> 32;
      }
      r.limbs_[i + b.limbs_.size()] = static_cast<std::uint32_t>( carry );
    }
    r.normalize();
    return r;
  }

  friend unat operator<<( const unat& a, std::size_t k )
  {
    if ( a.is_zero() )
      return {};
    unat r;
    const std::size_t ls = k / 32, bs = k % 32;
    r.limbs_.assign( a.limbs_.size() + ls + 1, 0 );
    for ( std::size_t l = 0; l < a.limbs_.size(); ++l )
    {
      std::uint64_t v = static_cast<std::uint64_t>( a.limbs_[l] ) << bs;
      r.limbs_[l + ls] |= static_cast<std::uint32_t>( v );
      r.limbs_[l + ls + 1] |= static_cast<std::uint32_t>( v >> 32 );
    }
    r.normalize();
    return r;
  }

  friend unat operator>>( const unat& a, std::size_t k )
  {
    const std::size_t ls = k / 32, bs = k % 32;
    if ( ls >= a.limbs_.size() )
      return {};
    unat r;
    r.limbs_.assign( a.limbs_.size() - ls, 0 );
    for ( std::size_t l = 0; l < r.limbs_.size(); ++l )
    {
      std::uint64_t v = a.limbs_[l + ls];
      if ( l + ls + 1 < a.limbs_.size() )
        v |= static_cast<std::uint64_t>( a.limbs_[l + ls + 1] ) << 32;
      r.limbs_[l] = static_cast<std::uint32_t>( v >> bs );
    }
    r.normalize();
    return r;
  }

  /// Truncated quotient and remainder; bitwise restoring division.
  static std::pair<unat, unat> divmod( const unat& a, const unat& b )
  {
    if ( b.is_zero() )
      throw division_by_zero();
    if ( a < b )
      return { unat{}, a };
    if ( b.limbs_.size() == 1 )
    {
      unat q = a;
      std::uint32_t r = q.div_small( b.limbs_[0] );
      return { q, unat( r ) };
    }
    unat q, r;
    for ( std::size_t i = a.bit_length(); i-- > 0; )
    {
      r = r << 1;
      if ( a.bit( i ) )
        r.set_bit( 0 );
      if ( r >= b )
      {
        r = r - b;
        q.set_bit( i );
      }
    }
    return { q, r };
  }

  friend unat operator/( const unat& a, const unat& b ) { return divmod( a, b ).first; }
  friend unat operator%( const unat& a, const unat& b ) { return divmod( a, b ).second; }

  unat& operator+=( const unat& b ) { return *this = *this + b; }
  unat& operator*=( const unat& b ) { return *this = *this * b; }

private:
  void normalize()
  {
    while ( !limbs_.empty() && limbs_.back() == 0 )
      limbs_.pop_back();
  }

  void mul_small_add( std::uint32_t m, std::uint32_t add )
  {
    std::uint64_t carry = add;
    for ( auto& l : limbs_ )
    {
      std::uint64_t t = static_cast<std::uint64_t>( l ) * m + carry;
      l = static_cast<std::uint32_t>( t );
      carry = t >> 32;
    }
    if ( carry )
      limbs_.push_back( static_cast<std::uint32_t>( carry ) );
  }

  std::uint32_t div_small( std::uint32_t d )
  {
    std::uint64_t rem = 0;
    for ( std::size_t l = limbs_.size(); l-- > 0; )
    {
      std::uint64_t cur = ( rem << 32 ) | limbs_[l];
      limbs_[l] = static_cast<std::uint32_t>( cur / d );
      rem = cur % d;
    }
    normalize();
    return static_cast<std::uint32_t>( rem );
  }

  std::vector<std::uint32_t> limbs_;
};

inline unat uadd( const unat& a, const unat& b ) { return a + b; }
inline unat umul( const unat& a, const unat& b ) { return a * b; }
inline std::strong_ordering ucmp( const unat& a, const unat& b ) { return a <=> b; }

/// Binary GCD (Stein); works on the bit representation without division.
inline unat gcd( unat a, unat b )
{
  if ( a.is_zero() && b.is_zero() )
    throw domain_error( "gcd(0, 0) is undefined" );
  if ( a.is_zero() )
    return b;
  if ( b.is_zero() )
    return a;
  const std::size_t shift = std::min( a.trailing_zeros(), b.trailing_zeros() );
  a = a >> a.trailing_zeros();
  while ( !b.is_zero() )
  {
    b = b >> b.trailing_zeros();
    if ( a > b )
      std::swap( a, b );
    b = b - a;
  }
  return a << shift;
}

/// floor(sqrt(a)), digit-by-digit.
inline unat isqrt( const unat& a )
{
  if ( a.is_zero() )
    return {};
  unat rem = a, root;
  std::size_t top = ( a.bit_length() - 1 ) & ~std::size_t{ 1 };
  unat bit = unat::pow2( top );
  while ( !bit.is_zero() )
  {
    unat trial = root + bit;
    if ( rem >= trial )
    {
      rem = rem - trial;
      root = ( root >> 1 ) + bit;
    }
    else
    {
      root = root >> 1;
    }
    bit = bit >> 2;
  }
  return root;
}

} // namespace satc
