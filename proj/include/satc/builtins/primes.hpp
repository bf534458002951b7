#pragma once

#include <cstdint>
#include <vector>

#include "../bitnum/unat.hpp"
#include "../error.hpp"

namespace satc
{

using prime_table = std::vector<unat>;

/// First k primes by incremental trial division against the primes found so far.
inline prime_table primes( std::size_t k )
{
  if ( k == 0 )
    throw domain_error( "primes: k must be at least 1" );
  std::vector<std::uint64_t> found;
  found.reserve( k );
  for ( std::uint64_t c = 2; found.size() < k; ++c )
  {
    bool prime = true;
    for ( auto p : found )
    {
      if ( p * p > c )
        break;
      if ( c % p == 0 )
      {
        prime = false;
        break;
      }
    }
    if ( prime )
      found.push_back( c );
  }
  return prime_table( found.begin(), found.end() );
}

inline unat nth_prime( std::size_t i )
{
  if ( i == 0 )
    throw domain_error( "nth_prime: primes are indexed from 1" );
  return primes( i ).back();
}

} // namespace satc
