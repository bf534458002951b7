#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "circuit.hpp"

namespace satc
{

/// size counts logic gates (AND, OR, NOT, thresholds); leaves are counted
/// separately in `nodes`, the total table length.  Depth: leaves 0, a gate
/// one more than its deepest input.
struct metrics
{
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t thresholds = 0;
  std::size_t max_fanin = 0;
  std::size_t nodes = 0;
};

/// Depth of every gate.
inline std::vector<std::size_t> gate_depths( const circuit& c )
{
  std::vector<std::size_t> d( c.num_gates(), 0 );
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    if ( is_leaf( c.kind( g ) ) )
      continue;
    std::size_t m = 0;
    for ( auto i : c.inputs( g ) )
      m = std::max( m, d[i] );
    d[g] = m + 1;
  }
  return d;
}

/// Metrics over the gates reachable from the outputs.
inline metrics measure( const circuit& c )
{
  std::vector<char> live( c.num_gates(), 0 );
  for ( auto o : c.outputs() )
    live[o] = 1;
  for ( gate_id g = static_cast<gate_id>( c.num_gates() ); g-- > 0; )
    if ( live[g] )
      for ( auto i : c.inputs( g ) )
        live[i] = 1;
  const auto d = gate_depths( c );
  metrics m;
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    if ( !live[g] )
      continue;
    ++m.nodes;
    if ( is_leaf( c.kind( g ) ) )
      continue;
    ++m.size;
    m.thresholds += is_threshold( c.kind( g ) );
    m.max_fanin = std::max<std::size_t>( m.max_fanin, c.at( g ).count );
  }
  for ( auto o : c.outputs() )
    m.depth = std::max( m.depth, d[o] );
  return m;
}

/// Copy keeping only gates reachable from the outputs; INPUT gates always
/// survive so input indices keep their ids.
inline circuit prune( const circuit& c )
{
  std::vector<char> live( c.num_gates(), 0 );
  for ( auto o : c.outputs() )
    live[o] = 1;
  for ( gate_id g = static_cast<gate_id>( c.num_gates() ); g-- > 0; )
    if ( live[g] )
      for ( auto i : c.inputs( g ) )
        live[i] = 1;
  circuit r( c.num_inputs() );
  std::vector<gate_id> map( c.num_gates() );
  wires in;
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    const auto k = c.kind( g );
    if ( k == gate_kind::input )
    {
      map[g] = r.input( c.at( g ).k );
      continue;
    }
    if ( !live[g] )
      continue;
    in.clear();
    for ( auto i : c.inputs( g ) )
      in.push_back( map[i] );
    map[g] = r.add_raw( k, c.at( g ).k, in );
  }
  wires outs;
  for ( auto o : c.outputs() )
    outs.push_back( map[o] );
  r.set_outputs( outs, c.labels() );
  return r;
}

/// Equivalent circuit without NOT gates: negations are pushed to the leaves
/// by De Morgan (thresholds: not(>= k) = (<= k-1), not(<= k) = (>= k+1)).
inline circuit to_leaf_negation( const circuit& c )
{
  constexpr gate_id unset = ~gate_id( 0 );
  circuit r( c.num_inputs() );
  std::vector<gate_id> pos( c.num_gates(), unset ), neg( c.num_gates(), unset );
  // pos/neg images built in topological order on demand
  std::function<gate_id( gate_id, bool )> image = [&]( gate_id g, bool negated ) -> gate_id {
    auto& slot = negated ? neg[g] : pos[g];
    if ( slot != unset )
      return slot;
    const auto& gt = c.at( g );
    const auto in = c.inputs( g );
    wires xs;
    switch ( gt.kind )
    {
    case gate_kind::input:
      slot = negated ? r.neg_input( gt.k ) : r.input( gt.k );
      break;
    case gate_kind::neg_input:
      slot = negated ? r.input( gt.k ) : r.neg_input( gt.k );
      break;
    case gate_kind::constant:
      slot = r.add_raw( gate_kind::constant, ( gt.k != 0 ) != negated, {} );
      break;
    case gate_kind::not_:
      slot = image( in[0], !negated );
      break;
    case gate_kind::and_:
    case gate_kind::or_:
    {
      for ( auto i : in )
        xs.push_back( image( i, negated ) );
      const bool is_and = ( gt.kind == gate_kind::and_ ) != negated;
      slot = r.add_raw( is_and ? gate_kind::and_ : gate_kind::or_, 0, xs );
      break;
    }
    case gate_kind::th_ge:
    case gate_kind::th_le:
    {
      for ( auto i : in )
        xs.push_back( image( i, false ) );
      if ( !negated )
        slot = r.add_raw( gt.kind, gt.k, xs );
      else if ( gt.kind == gate_kind::th_ge )
        slot = gt.k == 0 ? r.add_raw( gate_kind::constant, 0, {} ) : r.add_raw( gate_kind::th_le, gt.k - 1, xs );
      else
        slot = r.add_raw( gate_kind::th_ge, gt.k + 1, xs );
      break;
    }
    }
    return slot;
  };
  // Resolve bottom-up so recursion depth stays shallow.
  std::vector<char> need_pos( c.num_gates(), 0 ), need_neg( c.num_gates(), 0 );
  for ( auto o : c.outputs() )
    need_pos[o] = 1;
  for ( gate_id g = static_cast<gate_id>( c.num_gates() ); g-- > 0; )
  {
    for ( int s = 0; s < 2; ++s )
    {
      if ( !( s ? need_neg[g] : need_pos[g] ) )
        continue;
      const bool negated = s == 1;
      const auto k = c.kind( g );
      for ( auto i : c.inputs( g ) )
      {
        const bool child_neg = k == gate_kind::not_ ? !negated : ( is_threshold( k ) ? false : negated );
        ( child_neg ? need_neg : need_pos )[i] = 1;
      }
    }
  }
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    if ( need_pos[g] )
      image( g, false );
    if ( need_neg[g] )
      image( g, true );
  }
  wires outs;
  for ( auto o : c.outputs() )
    outs.push_back( image( o, false ) );
  r.set_outputs( outs, c.labels() );
  return r;
}

/// OR over i of AND(x_i, x_{i+1}) on n = 5 inputs.
inline circuit bigram11_fixture( std::size_t n = 5 )
{
  circuit c( n );
  wires terms;
  for ( std::size_t i = 0; i + 1 < n; ++i )
    terms.push_back( c.add_and( { c.input( i ), c.input( i + 1 ) } ) );
  c.add_output( c.add_or( terms ), "bigram11" );
  return c;
}

struct family_row
{
  std::size_t n = 0;
  metrics m;
};

struct family_report
{
  std::vector<family_row> rows;
  double size_slope = 0; ///< least-squares slope of log size against log n
  bool depth_constant = false;
  bool threshold_free = false;
};

inline double loglog_slope( const std::vector<std::pair<double, double>>& pts )
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>( pts.size() );
  for ( auto [x, y] : pts )
  {
    const double lx = std::log( x ), ly = std::log( y );
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double var = sxx - sx * sx / k;
  return var > 1e-12 ? ( sxy - sx * sy / k ) / var : 0.0;
}

inline family_report family_analyze( const std::function<circuit( std::size_t )>& family, const std::vector<std::size_t>& ns )
{
  if ( ns.size() < 3 )
    throw domain_error( "family_analyze needs at least three values of n" );
  family_report r;
  std::vector<std::pair<double, double>> pts;
  r.depth_constant = true;
  r.threshold_free = true;
  for ( auto n : ns )
  {
    const auto m = measure( family( n ) );
    r.rows.push_back( { n, m } );
    pts.emplace_back( static_cast<double>( n ), static_cast<double>( std::max<std::size_t>( m.size, 1 ) ) );
    r.depth_constant &= m.depth == r.rows.front().m.depth;
    r.threshold_free &= m.thresholds == 0;
  }
  r.size_slope = loglog_slope( pts );
  return r;
}

} // namespace satc
