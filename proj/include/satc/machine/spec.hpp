#pragma once

#include <memory>
#include <string>
#include <vector>

#include "attention.hpp"
#include "expr.hpp"
#include "host.hpp"

namespace satc
{

enum class datatype
{
  flt,
  rat
};

inline const char* to_string( datatype d ) { return d == datatype::flt ? "float" : "rational"; }

inline datatype parse_datatype( const std::string& s )
{
  if ( s == "float" || s == "flt" )
    return datatype::flt;
  if ( s == "rational" || s == "rat" )
    return datatype::rat;
  throw parse_error( "unknown datatype '" + s + "' (expected float or rational)" );
}

struct head_spec
{
  attention_kind kind = attention_kind::saturated;
  expr scorer; ///< x = v_i (query position), y = v_j
};

struct layer_spec
{
  std::vector<head_spec> heads;
  func activation; ///< x = v_{l,i}, y = concatenated head outputs; m outputs
};

/// Embedding arguments: x = one-hot token over the alphabet, y = (i) with i
/// the 1-based position.  Head h of a layer sums block h (width m / H) of the
/// previous values.
struct transformer_spec
{
  std::string name;
  std::vector<std::string> alphabet;
  datatype type = datatype::flt;
  std::size_t width = 0;
  std::size_t heads = 1;
  func embedding;
  std::vector<layer_spec> layers;
  std::vector<rat> classifier_w;
  rat classifier_b;
  std::size_t max_length = 0; ///< longest accepted input, 0 for unbounded
  std::shared_ptr<const host_registry> host;

  std::size_t block() const { return width / heads; }

  /// Throws eval_error describing the first violated invariant.
  void validate() const
  {
    auto fail = [&]( const std::string& what ) { throw eval_error( "invalid transformer spec: " + what ); };
    if ( alphabet.empty() )
      fail( "empty alphabet" );
    for ( std::size_t a = 0; a < alphabet.size(); ++a )
      for ( std::size_t b = a + 1; b < alphabet.size(); ++b )
        if ( alphabet[a] == alphabet[b] )
          fail( "duplicate alphabet symbol '" + alphabet[a] + "'" );
    if ( width == 0 || heads == 0 || width % heads != 0 )
      fail( "width " + std::to_string( width ) + " is not a positive multiple of heads " + std::to_string( heads ) );
    if ( classifier_w.size() != width )
      fail( "classifier W has " + std::to_string( classifier_w.size() ) + " entries for width " + std::to_string( width ) );
    auto check = [&]( const func& f, std::size_t outputs, std::size_t xa, std::size_t ya, const std::string& what ) {
      if ( f.size() != outputs )
        fail( what + " has " + std::to_string( f.size() ) + " outputs, expected " + std::to_string( outputs ) );
      const auto u = usage( f );
      if ( u.x_arity > xa || u.y_arity > ya )
        fail( what + " reads an argument index out of range" );
      for ( const auto& c : u.calls )
        if ( !host || !host->find( c ) )
          fail( what + " calls unknown host function '" + c + "'" );
      for ( const auto& e : f )
        check_constants( e, what );
    };
    check( embedding, width, alphabet.size(), 1, "embedding" );
    for ( std::size_t l = 0; l < layers.size(); ++l )
    {
      const auto tag = "layer " + std::to_string( l + 1 );
      if ( layers[l].heads.size() != heads )
        fail( tag + " has " + std::to_string( layers[l].heads.size() ) + " heads, expected " + std::to_string( heads ) );
      for ( std::size_t h = 0; h < heads; ++h )
        check( { layers[l].heads[h].scorer }, 1, width, width, tag + " head " + std::to_string( h + 1 ) + " scorer" );
      check( layers[l].activation, width, width, width, tag + " activation" );
    }
    if ( type == datatype::flt )
    {
      for ( const auto& w : classifier_w )
        if ( !flt::from_rat( w ) )
          fail( "classifier weight " + w.to_string() + " is not a float" );
      if ( !flt::from_rat( classifier_b ) )
        fail( "classifier bias is not a float" );
    }
  }

  /// Token indices for a word: one symbol per character when every symbol is
  /// a single character, otherwise whitespace-separated symbols.
  std::vector<std::size_t> tokenize( const std::string& w ) const
  {
    const bool single = std::all_of( alphabet.begin(), alphabet.end(), []( const auto& s ) { return s.size() == 1; } );
    std::vector<std::string> parts;
    if ( single )
    {
      for ( char c : w )
        if ( !std::isspace( static_cast<unsigned char>( c ) ) )
          parts.emplace_back( 1, c );
    }
    else
    {
      std::size_t i = 0;
      while ( i < w.size() )
      {
        while ( i < w.size() && std::isspace( static_cast<unsigned char>( w[i] ) ) )
          ++i;
        std::size_t j = i;
        while ( j < w.size() && !std::isspace( static_cast<unsigned char>( w[j] ) ) )
          ++j;
        if ( j > i )
          parts.push_back( w.substr( i, j - i ) );
        i = j;
      }
    }
    std::vector<std::size_t> out;
    for ( const auto& p : parts )
    {
      auto it = std::find( alphabet.begin(), alphabet.end(), p );
      if ( it == alphabet.end() )
        throw eval_error( "token '" + p + "' is not in the alphabet" );
      out.push_back( static_cast<std::size_t>( it - alphabet.begin() ) );
    }
    return out;
  }

  std::string detokenize( const std::vector<std::size_t>& t ) const
  {
    const bool single = std::all_of( alphabet.begin(), alphabet.end(), []( const auto& s ) { return s.size() == 1; } );
    std::string out;
    for ( std::size_t i = 0; i < t.size(); ++i )
    {
      if ( !single && i )
        out += ' ';
      out += alphabet.at( t[i] );
    }
    return out;
  }

private:
  void check_constants( const expr& e, const std::string& what ) const
  {
    if ( type == datatype::flt )
    {
      if ( e->kind == op::constant && !flt::from_rat( e->value ) )
        throw eval_error( "invalid transformer spec: " + what + " uses constant " + e->value.to_string() + " which is not a float" );
      for ( const auto& c : e->coeffs )
        if ( !flt::from_rat( c ) )
          throw eval_error( "invalid transformer spec: " + what + " uses coefficient " + c.to_string() + " which is not a float" );
    }
    for ( const auto& a : e->args )
      check_constants( a, what );
  }
};

// ---- spec files ------------------------------------------------------------
//
//   (transformer
//     (name maj)                      ; optional
//     (alphabet 0 1)
//     (datatype float)                ; or rational
//     (width 2)
//     (heads 1)
//     (max-length 16)                 ; optional
//     (embedding <expr> ...)          ; width expressions
//     (layer
//       (head saturated <expr>)       ; heads times; hard | saturated | uniform
//       (activation <expr> ...))      ; width expressions
//     (classifier (W <c> ...) (b <c>)))

namespace detail
{

inline std::size_t spec_natural( const sexpr& s )
{
  if ( s.items.size() != 2 )
    s.fail( "'" + s.head() + "' takes one value" );
  return parse_index( s.items[1] );
}

inline func parse_func( const sexpr& s )
{
  func f;
  for ( std::size_t i = 1; i < s.items.size(); ++i )
    f.push_back( parse_expr( s.items[i] ) );
  return f;
}

} // namespace detail

inline transformer_spec parse_spec( const sexpr& doc, std::shared_ptr<const host_registry> host = nullptr )
{
  if ( doc.head() != "transformer" )
    doc.fail( "a spec file must be a single (transformer ...) form" );
  transformer_spec sp;
  sp.host = host ? std::move( host ) : std::make_shared<const host_registry>( standard_host() );
  bool seen_width = false, seen_cls = false, seen_alpha = false, seen_emb = false;
  for ( std::size_t i = 1; i < doc.items.size(); ++i )
  {
    const sexpr& f = doc.items[i];
    const std::string& h = f.head();
    if ( h == "name" )
    {
      if ( f.items.size() != 2 || !f.items[1].is_atom )
        f.fail( "(name <symbol>)" );
      sp.name = f.items[1].atom;
    }
    else if ( h == "alphabet" )
    {
      seen_alpha = true;
      for ( std::size_t k = 1; k < f.items.size(); ++k )
      {
        if ( !f.items[k].is_atom || f.items[k].atom.empty() )
          f.items[k].fail( "alphabet symbols must be atoms" );
        sp.alphabet.push_back( f.items[k].atom );
      }
    }
    else if ( h == "datatype" )
    {
      if ( f.items.size() != 2 || !f.items[1].is_atom )
        f.fail( "(datatype float|rational)" );
      try
      {
        sp.type = parse_datatype( f.items[1].atom );
      }
      catch ( const parse_error& e )
      {
        f.items[1].fail( e.what() );
      }
    }
    else if ( h == "width" )
    {
      seen_width = true;
      sp.width = detail::spec_natural( f );
    }
    else if ( h == "max-length" )
    {
      sp.max_length = detail::spec_natural( f );
    }
    else if ( h == "heads" )
    {
      sp.heads = detail::spec_natural( f );
    }
    else if ( h == "embedding" )
    {
      seen_emb = true;
      sp.embedding = detail::parse_func( f );
    }
    else if ( h == "layer" )
    {
      layer_spec layer;
      bool seen_act = false;
      for ( std::size_t k = 1; k < f.items.size(); ++k )
      {
        const sexpr& g = f.items[k];
        if ( g.head() == "head" )
        {
          if ( g.items.size() != 3 || !g.items[1].is_atom )
            g.fail( "(head <kind> <scorer>)" );
          head_spec hs;
          try
          {
            hs.kind = parse_attention_kind( g.items[1].atom );
          }
          catch ( const parse_error& e )
          {
            g.items[1].fail( e.what() );
          }
          hs.scorer = parse_expr( g.items[2] );
          layer.heads.push_back( std::move( hs ) );
        }
        else if ( g.head() == "activation" )
        {
          seen_act = true;
          layer.activation = detail::parse_func( g );
        }
        else
        {
          g.fail( "expected (head ...) or (activation ...) inside a layer" );
        }
      }
      if ( !seen_act )
        f.fail( "layer without an activation" );
      sp.layers.push_back( std::move( layer ) );
    }
    else if ( h == "classifier" )
    {
      seen_cls = true;
      for ( std::size_t k = 1; k < f.items.size(); ++k )
      {
        const sexpr& g = f.items[k];
        if ( g.head() == "W" )
        {
          for ( std::size_t t = 1; t < g.items.size(); ++t )
            sp.classifier_w.push_back( detail::parse_constant( g.items[t] ) );
        }
        else if ( g.head() == "b" )
        {
          if ( g.items.size() != 2 )
            g.fail( "(b <constant>)" );
          sp.classifier_b = detail::parse_constant( g.items[1] );
        }
        else
        {
          g.fail( "expected (W ...) or (b ...) inside classifier" );
        }
      }
    }
    else
    {
      f.fail( "unknown spec field '" + ( h.empty() ? std::string( "?" ) : h ) + "'" );
    }
  }
  if ( !seen_alpha || !seen_width || !seen_emb || !seen_cls )
    doc.fail( "spec needs alphabet, width, embedding and classifier" );
  try
  {
    sp.validate();
  }
  catch ( const eval_error& e )
  {
    throw parse_error( e.what(), doc.line, doc.column );
  }
  return sp;
}

inline transformer_spec parse_spec( std::string_view text, std::shared_ptr<const host_registry> host = nullptr )
{
  return parse_spec( read_sexpr( text ), std::move( host ) );
}

inline std::string to_string( const transformer_spec& sp )
{
  auto fn = []( const func& f, const std::string& indent ) {
    std::string s;
    for ( const auto& e : f )
      s += "\n" + indent + to_string( e );
    return s;
  };
  std::string s = "(transformer\n";
  if ( !sp.name.empty() )
    s += "  (name " + sp.name + ")\n";
  s += "  (alphabet";
  for ( const auto& a : sp.alphabet )
    s += " " + a;
  s += ")\n  (datatype " + std::string( to_string( sp.type ) ) + ")\n";
  s += "  (width " + std::to_string( sp.width ) + ")\n  (heads " + std::to_string( sp.heads ) + ")\n";
  if ( sp.max_length )
    s += "  (max-length " + std::to_string( sp.max_length ) + ")\n";
  s += "  (embedding" + fn( sp.embedding, "    " ) + ")\n";
  for ( const auto& l : sp.layers )
  {
    s += "  (layer\n";
    for ( const auto& h : l.heads )
      s += "    (head " + std::string( to_string( h.kind ) ) + " " + to_string( h.scorer ) + ")\n";
    s += "    (activation" + fn( l.activation, "      " ) + "))\n";
  }
  s += "  (classifier (W";
  for ( const auto& w : sp.classifier_w )
    s += " " + w.to_string();
  s += ") (b " + sp.classifier_b.to_string() + ")))\n";
  return s;
}

} // namespace satc
