#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "../circuit/circuit.hpp"
#include "../error.hpp"

namespace satc::synth
{

inline constexpr std::size_t default_lookup_cap = 16;

/// Truth table of f : {0,1}^c -> {0,1}^d.  Row r is the input whose bit i
/// is bit i of r; rows[r][j] is output bit j.
struct lookup_spec
{
  std::size_t c = 0;
  std::size_t d = 0;
  std::vector<std::vector<bool>> rows;

  void validate( std::size_t cap = default_lookup_cap ) const
  {
    if ( c == 0 )
      throw domain_error( "lookup needs at least one input bit" );
    if ( c > cap )
      throw domain_error( "lookup width " + std::to_string( c ) + " exceeds the cap of " + std::to_string( cap ) + " bits" );
    if ( rows.size() != ( std::size_t( 1 ) << c ) )
      throw domain_error( "lookup table must have 2^c rows" );
    for ( const auto& r : rows )
      if ( r.size() != d )
        throw domain_error( "lookup row width differs from d" );
  }
};

/// Disjunctive normal form: a negation layer, one AND term per row with a
/// nonzero output, one OR per output bit.  Built verbatim so the depth is
/// exactly 3: outputs that would otherwise be shallower (no terms, or terms
/// without negated literals) receive the contradictory term x_0 AND NOT x_0.
/// Size <= (2^c + c + 1) d.
inline circuit dnf_lookup( const lookup_spec& spec, std::size_t cap = default_lookup_cap )
{
  spec.validate( cap );
  circuit out( spec.c );
  std::vector<gate_id> negs( spec.c, ~gate_id( 0 ) );
  auto negated = [&]( std::size_t i ) {
    if ( negs[i] == ~gate_id( 0 ) )
      negs[i] = out.add_raw( gate_kind::not_, 0, { out.input( i ) } );
    return negs[i];
  };
  std::vector<gate_id> term( spec.rows.size(), ~gate_id( 0 ) );
  for ( std::size_t r = 0; r < spec.rows.size(); ++r )
  {
    bool used = false;
    for ( bool b : spec.rows[r] )
      used = used || b;
    if ( !used )
      continue;
    wires lits;
    for ( std::size_t i = 0; i < spec.c; ++i )
      lits.push_back( ( r >> i ) & 1u ? out.input( i ) : negated( i ) );
    term[r] = out.add_raw( gate_kind::and_, 0, lits );
  }
  gate_id contradiction = ~gate_id( 0 );
  const std::size_t all_ones = spec.rows.size() - 1;
  wires outs;
  for ( std::size_t j = 0; j < spec.d; ++j )
  {
    wires terms;
    bool deep = false;
    for ( std::size_t r = 0; r < spec.rows.size(); ++r )
      if ( spec.rows[r][j] )
      {
        terms.push_back( term[r] );
        deep = deep || r != all_ones;
      }
    if ( !deep )
    {
      if ( contradiction == ~gate_id( 0 ) )
        contradiction = out.add_raw( gate_kind::and_, 0, { out.input( 0 ), negated( 0 ) } );
      terms.push_back( contradiction );
    }
    outs.push_back( out.add_raw( gate_kind::or_, 0, terms ) );
  }
  out.set_outputs( outs );
  return out;
}

/// The same DNF built inside an existing circuit over arbitrary wires, using
/// the circuit's folding.  Returns d output wires.
inline wires lookup_into( circuit& c, std::span<const gate_id> in, const std::vector<std::vector<bool>>& rows, std::size_t d )
{
  std::vector<wires> terms( d );
  for ( std::size_t r = 0; r < rows.size(); ++r )
  {
    bool used = false;
    for ( bool b : rows[r] )
      used = used || b;
    if ( !used )
      continue;
    wires lits;
    for ( std::size_t i = 0; i < in.size(); ++i )
      lits.push_back( ( r >> i ) & 1u ? in[i] : c.add_not( in[i] ) );
    const gate_id t = c.add_and( lits );
    for ( std::size_t j = 0; j < d; ++j )
      if ( rows[r][j] )
        terms[j].push_back( t );
  }
  wires out;
  for ( auto& t : terms )
    out.push_back( c.add_or( t ) );
  return out;
}

} // namespace satc::synth
