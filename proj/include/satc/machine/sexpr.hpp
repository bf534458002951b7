#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"

namespace satc
{

/// Node of a parsed s-expression document.  Atoms keep their source text;
/// every node records where it started for diagnostics.
struct sexpr
{
  bool is_atom = false;
  std::string atom;
  std::vector<sexpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_list() const noexcept { return !is_atom; }

  /// Head symbol of a list, empty when not a list or the first item is a list.
  const std::string& head() const
  {
    static const std::string none;
    return is_list() && !items.empty() && items[0].is_atom ? items[0].atom : none;
  }

  [[noreturn]] void fail( const std::string& what ) const { throw parse_error( what, line, column ); }
};

namespace detail
{

class sexpr_reader
{
public:
  explicit sexpr_reader( std::string_view text ) : text_( text ) {}

  std::vector<sexpr> read_all()
  {
    std::vector<sexpr> out;
    skip();
    while ( pos_ < text_.size() )
    {
      out.push_back( read() );
      skip();
    }
    return out;
  }

private:
  void advance()
  {
    if ( text_[pos_] == '\n' )
    {
      ++line_;
      col_ = 1;
    }
    else
    {
      ++col_;
    }
    ++pos_;
  }

  void skip()
  {
    while ( pos_ < text_.size() )
    {
      if ( std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
        advance();
      else if ( text_[pos_] == ';' )
        while ( pos_ < text_.size() && text_[pos_] != '\n' )
          advance();
      else
        break;
    }
  }

  sexpr read()
  {
    sexpr node;
    node.line = line_;
    node.column = col_;
    if ( text_[pos_] == ')' )
      throw parse_error( "unexpected ')'", line_, col_ );
    if ( text_[pos_] == '(' )
    {
      advance();
      skip();
      while ( pos_ < text_.size() && text_[pos_] != ')' )
      {
        node.items.push_back( read() );
        skip();
      }
      if ( pos_ >= text_.size() )
        throw parse_error( "unterminated list", node.line, node.column );
      advance();
      return node;
    }
    node.is_atom = true;
    if ( text_[pos_] == '"' )
    {
      advance();
      while ( pos_ < text_.size() && text_[pos_] != '"' )
      {
        node.atom.push_back( text_[pos_] );
        advance();
      }
      if ( pos_ >= text_.size() )
        throw parse_error( "unterminated string", node.line, node.column );
      advance();
      return node;
    }
    while ( pos_ < text_.size() && !std::isspace( static_cast<unsigned char>( text_[pos_] ) ) && text_[pos_] != '(' &&
            text_[pos_] != ')' && text_[pos_] != ';' )
    {
      node.atom.push_back( text_[pos_] );
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

} // namespace detail

inline std::vector<sexpr> read_sexprs( std::string_view text ) { return detail::sexpr_reader( text ).read_all(); }

inline sexpr read_sexpr( std::string_view text )
{
  auto all = read_sexprs( text );
  if ( all.size() != 1 )
    throw parse_error( "expected exactly one s-expression, found " + std::to_string( all.size() ) );
  return std::move( all[0] );
}

} // namespace satc
