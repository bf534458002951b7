#pragma once

#include <string>
#include <string_view>

#include "flt.hpp"

namespace satc
{

// Textual literals.  Unsigned: "42" or "0b101010" (most significant bit
// first).  Rational: "[-]p[/q]".  Float: "[-]p[/2^e]", or "[-]p/q" with q a
// power of two.

inline unat parse_unat( std::string_view s )
{
  if ( s.size() > 2 && s[0] == '0' && ( s[1] == 'b' || s[1] == 'B' ) )
    return unat::from_binary( s.substr( 2 ) );
  return unat::from_decimal( s );
}

inline std::string format_binary( const unat& x ) { return "0b" + x.to_binary(); }

namespace detail
{

struct literal_parts
{
  bool negative = false;
  unat p;
  unat q{ 1 };
  bool pow2_form = false; ///< written as "/2^e"
  std::uint64_t e = 0;
};

inline literal_parts split_literal( std::string_view s )
{
  literal_parts out;
  if ( s.empty() )
    throw parse_error( "empty numeric literal" );
  if ( s[0] == '-' || s[0] == '+' )
  {
    out.negative = s[0] == '-';
    s.remove_prefix( 1 );
  }
  const auto slash = s.find( '/' );
  out.p = parse_unat( s.substr( 0, slash ) );
  if ( slash == std::string_view::npos )
    return out;
  std::string_view den = s.substr( slash + 1 );
  if ( den.size() > 2 && den.substr( 0, 2 ) == "2^" )
  {
    out.pow2_form = true;
    out.e = parse_unat( den.substr( 2 ) ).to_u64();
    out.q = unat::pow2( out.e );
  }
  else
  {
    out.q = parse_unat( den );
  }
  if ( out.q.is_zero() )
    throw parse_error( "zero denominator in literal '" + std::string( s ) + "'" );
  return out;
}

} // namespace detail

inline rat parse_rat( std::string_view s )
{
  const auto parts = detail::split_literal( s );
  return rat( parts.p, parts.q, parts.negative );
}

inline flt parse_flt( std::string_view s )
{
  const auto parts = detail::split_literal( s );
  if ( parts.pow2_form )
    return flt( parts.p, parts.e, parts.negative );
  if ( !parts.q.is_power_of_two() )
    throw parse_error( "float literal '" + std::string( s ) + "' has a denominator that is not a power of two" );
  return flt( parts.p, parts.q.trailing_zeros(), parts.negative );
}

inline std::string to_string( const unat& x ) { return x.to_decimal(); }
inline std::string to_string( const rat& x ) { return x.to_string(); }
inline std::string to_string( const flt& x ) { return x.to_string(); }

} // namespace satc
