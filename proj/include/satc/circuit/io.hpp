#pragma once

#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "circuit.hpp"

namespace satc
{

// JSON document:
//   { "n": <inputs>,
//     "gates": [ { "id": <int>, "kind": "AND", "k": <int>, "inputs": [<id>...] }, ... ],
//     "outputs": [<id>...],
//     "labels": ["..."] }                       // optional, one per output
// "k" is the input index (INPUT, NEG_INPUT), the value (CONST) or the
// threshold (THRESHOLD_GE, THRESHOLD_LE); it is omitted for other kinds.

inline gate_kind parse_gate_kind( const std::string& s )
{
  for ( auto k : { gate_kind::input, gate_kind::neg_input, gate_kind::constant, gate_kind::and_, gate_kind::or_, gate_kind::not_,
                   gate_kind::th_ge, gate_kind::th_le } )
    if ( s == to_string( k ) )
      return k;
  throw parse_error( "unknown gate kind '" + s + "'" );
}

inline bool has_k( gate_kind k ) { return is_leaf( k ) || is_threshold( k ); }

inline nlohmann::json to_json( const circuit& c )
{
  nlohmann::json gates = nlohmann::json::array();
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    nlohmann::json j;
    j["id"] = g;
    j["kind"] = to_string( c.kind( g ) );
    if ( has_k( c.kind( g ) ) )
      j["k"] = c.at( g ).k;
    const auto in = c.inputs( g );
    j["inputs"] = std::vector<gate_id>( in.begin(), in.end() );
    gates.push_back( std::move( j ) );
  }
  nlohmann::json doc;
  doc["n"] = c.num_inputs();
  doc["gates"] = std::move( gates );
  doc["outputs"] = c.outputs();
  if ( !c.labels().empty() )
    doc["labels"] = c.labels();
  return doc;
}

/// Gates may appear in any order; they are re-numbered topologically.
inline circuit from_json( const nlohmann::json& doc )
{
  try
  {
    if ( !doc.is_object() || !doc.contains( "n" ) || !doc.contains( "gates" ) || !doc.contains( "outputs" ) )
      throw parse_error( "circuit document needs n, gates and outputs" );
    const std::size_t n = doc.at( "n" ).get<std::size_t>();
    struct raw
    {
      gate_kind kind;
      std::uint64_t k;
      std::vector<std::int64_t> inputs;
    };
    std::map<std::int64_t, raw> table;
    for ( const auto& j : doc.at( "gates" ) )
    {
      const auto id = j.at( "id" ).get<std::int64_t>();
      raw r{ parse_gate_kind( j.at( "kind" ).get<std::string>() ), 0, {} };
      if ( has_k( r.kind ) )
      {
        if ( !j.contains( "k" ) )
          throw parse_error( "gate " + std::to_string( id ) + " (" + to_string( r.kind ) + ") needs k" );
        const auto k = j.at( "k" ).get<std::int64_t>();
        if ( k < 0 )
          throw parse_error( "gate " + std::to_string( id ) + " has negative k" );
        r.k = static_cast<std::uint64_t>( k );
      }
      if ( j.contains( "inputs" ) )
        r.inputs = j.at( "inputs" ).get<std::vector<std::int64_t>>();
      if ( !table.emplace( id, std::move( r ) ).second )
        throw parse_error( "duplicate gate id " + std::to_string( id ) );
    }
    for ( const auto& [id, r] : table )
      for ( auto i : r.inputs )
        if ( !table.count( i ) )
          throw parse_error( "gate " + std::to_string( id ) + " references unknown gate id " + std::to_string( i ) );
    circuit c( n );
    std::map<std::int64_t, gate_id> done;
    std::map<std::int64_t, int> state; // 1 visiting, 2 done
    std::vector<std::pair<std::int64_t, std::size_t>> stack;
    for ( const auto& [root, unused] : table )
    {
      if ( state[root] )
        continue;
      stack.push_back( { root, 0 } );
      state[root] = 1;
      while ( !stack.empty() )
      {
        auto& [id, next] = stack.back();
        const raw& r = table.at( id );
        if ( next < r.inputs.size() )
        {
          const auto child = r.inputs[next++];
          if ( state[child] == 1 )
            throw parse_error( "cycle through gate id " + std::to_string( child ) );
          if ( state[child] == 0 )
          {
            state[child] = 1;
            stack.push_back( { child, 0 } );
          }
          continue;
        }
        wires in;
        for ( auto i : r.inputs )
          in.push_back( done.at( i ) );
        try
        {
          done[id] = r.kind == gate_kind::input ? c.input( r.k ) : c.add_raw( r.kind, r.k, in );
        }
        catch ( const domain_error& e )
        {
          throw parse_error( "gate " + std::to_string( id ) + ": " + e.what() );
        }
        state[id] = 2;
        stack.pop_back();
      }
    }
    wires outs;
    for ( const auto& o : doc.at( "outputs" ) )
    {
      const auto id = o.get<std::int64_t>();
      if ( !done.count( id ) )
        throw parse_error( "output references unknown gate id " + std::to_string( id ) );
      outs.push_back( done.at( id ) );
    }
    if ( outs.empty() )
      throw parse_error( "circuit has no outputs" );
    std::vector<std::string> labels;
    if ( doc.contains( "labels" ) )
      labels = doc.at( "labels" ).get<std::vector<std::string>>();
    if ( !labels.empty() && labels.size() != outs.size() )
      throw parse_error( "labels must have one entry per output" );
    c.set_outputs( outs, labels );
    return c;
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw parse_error( std::string( "malformed circuit document: " ) + e.what() );
  }
}

inline circuit from_json_text( const std::string& text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( text );
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw parse_error( std::string( "malformed JSON: " ) + e.what() );
  }
  return from_json( doc );
}

/// Graphviz digraph; edges point from inputs to gates, outputs are doubled.
inline std::string to_dot( const circuit& c )
{
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=BT;\n";
  for ( gate_id g = 0; g < c.num_gates(); ++g )
  {
    const auto& gt = c.at( g );
    os << "  g" << g << " [label=\"";
    switch ( gt.kind )
    {
    case gate_kind::input: os << "x" << gt.k + 1; break;
    case gate_kind::neg_input: os << "!x" << gt.k + 1; break;
    case gate_kind::constant: os << gt.k; break;
    case gate_kind::th_ge: os << ">=" << gt.k; break;
    case gate_kind::th_le: os << "<=" << gt.k; break;
    default: os << to_string( gt.kind ); break;
    }
    os << "\"";
    if ( is_leaf( gt.kind ) )
      os << ", shape=box";
    if ( std::find( c.outputs().begin(), c.outputs().end(), g ) != c.outputs().end() )
      os << ", peripheries=2";
    os << "];\n";
    for ( auto i : c.inputs( g ) )
      os << "  g" << i << " -> g" << g << ";\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace satc
