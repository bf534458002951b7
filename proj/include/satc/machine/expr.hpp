#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "../bitnum/literal.hpp"
#include "../bitnum/rat.hpp"
#include "sexpr.hpp"

namespace satc
{

// Scalar expressions over two argument vectors x and y.  A function is a
// list of scalar expressions, one per output component.
//
//   (x k) (y k)          k-th argument component, 0-based
//   literal              "3", "-1/2", "5/2^3"
//   (add a b ...) (sub a b) (mul a b) (div a b) (neg a)
//   (sqrt a) (relu a)
//   (gt a b) (ge a b) (eq a b)      1 or 0
//   (select c a b)                  a if c != 0 else b
//   (lin c0 c1 e1 c2 e2 ...)        c0 + sum ci ei, constant ci
//   (num a) (den a)                 |numerator|, denominator
//   (idiv a b)                      trunc(a / b) computed exactly
//   (divides a b)                   1 if integers a != 0, b and a | b
//   (call name a ...)               host function

enum class op
{
  constant,
  arg_x,
  arg_y,
  add,
  sub,
  mul,
  div,
  neg,
  sqrt,
  relu,
  gt,
  ge,
  eq,
  select,
  lin,
  num,
  den,
  idiv,
  divides,
  call
};

struct expr_node;
using expr = std::shared_ptr<const expr_node>;

struct expr_node
{
  op kind = op::constant;
  rat value;             ///< constant
  std::size_t index = 0; ///< arg_x, arg_y
  std::string name;      ///< call
  std::vector<expr> args;
  std::vector<rat> coeffs; ///< lin: c0, c1, ..., one more than args
};

using func = std::vector<expr>;

namespace detail
{

struct op_info
{
  op kind;
  const char* name;
  int arity; ///< -1: variadic
};

inline const std::vector<op_info>& op_table()
{
  static const std::vector<op_info> t = {
      { op::add, "add", -1 },     { op::sub, "sub", 2 },       { op::mul, "mul", 2 },   { op::div, "div", 2 },
      { op::neg, "neg", 1 },      { op::sqrt, "sqrt", 1 },     { op::relu, "relu", 1 }, { op::gt, "gt", 2 },
      { op::ge, "ge", 2 },        { op::eq, "eq", 2 },         { op::select, "select", 3 }, { op::num, "num", 1 },
      { op::den, "den", 1 },      { op::idiv, "idiv", 2 },     { op::divides, "divides", 2 } };
  return t;
}

inline const op_info* find_op( const std::string& name )
{
  for ( const auto& i : op_table() )
    if ( name == i.name )
      return &i;
  return nullptr;
}

inline const char* op_name( op k )
{
  for ( const auto& i : op_table() )
    if ( i.kind == k )
      return i.name;
  switch ( k )
  {
  case op::constant: return "const";
  case op::arg_x: return "x";
  case op::arg_y: return "y";
  case op::lin: return "lin";
  case op::call: return "call";
  default: return "?";
  }
}

inline expr make( expr_node n ) { return std::make_shared<const expr_node>( std::move( n ) ); }

} // namespace detail

/// Expression builders.
namespace ex
{

inline expr c( const rat& v )
{
  expr_node n;
  n.value = v;
  return detail::make( std::move( n ) );
}
inline expr c( std::int64_t v ) { return c( rat::integer( v ) ); }

inline expr x( std::size_t k )
{
  expr_node n;
  n.kind = op::arg_x;
  n.index = k;
  return detail::make( std::move( n ) );
}

inline expr y( std::size_t k )
{
  expr_node n;
  n.kind = op::arg_y;
  n.index = k;
  return detail::make( std::move( n ) );
}

inline expr apply( op k, std::vector<expr> args )
{
  expr_node n;
  n.kind = k;
  n.args = std::move( args );
  return detail::make( std::move( n ) );
}

inline expr add( expr a, expr b ) { return apply( op::add, { std::move( a ), std::move( b ) } ); }
inline expr sub( expr a, expr b ) { return apply( op::sub, { std::move( a ), std::move( b ) } ); }
inline expr mul( expr a, expr b ) { return apply( op::mul, { std::move( a ), std::move( b ) } ); }
inline expr div( expr a, expr b ) { return apply( op::div, { std::move( a ), std::move( b ) } ); }
inline expr neg( expr a ) { return apply( op::neg, { std::move( a ) } ); }
inline expr sqrt( expr a ) { return apply( op::sqrt, { std::move( a ) } ); }
inline expr relu( expr a ) { return apply( op::relu, { std::move( a ) } ); }
inline expr gt( expr a, expr b ) { return apply( op::gt, { std::move( a ), std::move( b ) } ); }
inline expr ge( expr a, expr b ) { return apply( op::ge, { std::move( a ), std::move( b ) } ); }
inline expr eq( expr a, expr b ) { return apply( op::eq, { std::move( a ), std::move( b ) } ); }
inline expr select( expr cnd, expr a, expr b ) { return apply( op::select, { std::move( cnd ), std::move( a ), std::move( b ) } ); }
inline expr num( expr a ) { return apply( op::num, { std::move( a ) } ); }
inline expr den( expr a ) { return apply( op::den, { std::move( a ) } ); }
inline expr idiv( expr a, expr b ) { return apply( op::idiv, { std::move( a ), std::move( b ) } ); }
inline expr divides( expr a, expr b ) { return apply( op::divides, { std::move( a ), std::move( b ) } ); }

inline expr lin( const rat& c0, std::vector<std::pair<rat, expr>> terms )
{
  expr_node n;
  n.kind = op::lin;
  n.coeffs.push_back( c0 );
  for ( auto& [ci, ei] : terms )
  {
    n.coeffs.push_back( ci );
    n.args.push_back( std::move( ei ) );
  }
  return detail::make( std::move( n ) );
}

inline expr call( std::string name, std::vector<expr> args )
{
  expr_node n;
  n.kind = op::call;
  n.name = std::move( name );
  n.args = std::move( args );
  return detail::make( std::move( n ) );
}

} // namespace ex

// ---- parsing and printing --------------------------------------------------

namespace detail
{

inline std::size_t parse_index( const sexpr& s )
{
  if ( !s.is_atom || s.atom.empty() || !std::all_of( s.atom.begin(), s.atom.end(), ::isdigit ) )
    s.fail( "expected a component index, got '" + ( s.is_atom ? s.atom : std::string( "(...)" ) ) + "'" );
  return std::stoul( s.atom );
}

inline rat parse_constant( const sexpr& s )
{
  if ( !s.is_atom )
    s.fail( "expected a numeric constant" );
  try
  {
    return parse_rat( s.atom );
  }
  catch ( const std::exception& e )
  {
    s.fail( "bad numeric literal '" + s.atom + "': " + e.what() );
  }
}

} // namespace detail

inline expr parse_expr( const sexpr& s )
{
  if ( s.is_atom )
  {
    if ( s.atom.empty() || !( std::isdigit( static_cast<unsigned char>( s.atom[0] ) ) || s.atom[0] == '-' || s.atom[0] == '+' ) )
      s.fail( "unknown symbol '" + s.atom + "'" );
    return ex::c( detail::parse_constant( s ) );
  }
  const std::string& h = s.head();
  if ( h.empty() )
    s.fail( "expected an operator name at the head of the list" );
  const auto nargs = s.items.size() - 1;
  if ( h == "x" || h == "y" )
  {
    if ( nargs != 1 )
      s.fail( "(" + h + " k) takes one index" );
    const auto k = detail::parse_index( s.items[1] );
    return h == "x" ? ex::x( k ) : ex::y( k );
  }
  if ( h == "const" )
  {
    if ( nargs != 1 )
      s.fail( "(const v) takes one literal" );
    return ex::c( detail::parse_constant( s.items[1] ) );
  }
  if ( h == "lin" )
  {
    if ( nargs == 0 || nargs % 2 == 0 )
      s.fail( "(lin c0 c1 e1 ...) needs an offset followed by coefficient/expression pairs" );
    std::vector<std::pair<rat, expr>> terms;
    for ( std::size_t i = 2; i < s.items.size(); i += 2 )
      terms.emplace_back( detail::parse_constant( s.items[i] ), parse_expr( s.items[i + 1] ) );
    return ex::lin( detail::parse_constant( s.items[1] ), std::move( terms ) );
  }
  if ( h == "call" )
  {
    if ( nargs == 0 || !s.items[1].is_atom )
      s.fail( "(call name args...) needs a function name" );
    std::vector<expr> args;
    for ( std::size_t i = 2; i < s.items.size(); ++i )
      args.push_back( parse_expr( s.items[i] ) );
    return ex::call( s.items[1].atom, std::move( args ) );
  }
  const auto* info = detail::find_op( h );
  if ( !info )
    s.fail( "unknown operator '" + h + "'" );
  if ( info->arity >= 0 && nargs != static_cast<std::size_t>( info->arity ) )
    s.fail( "'" + h + "' takes " + std::to_string( info->arity ) + " arguments, got " + std::to_string( nargs ) );
  if ( info->arity < 0 && nargs < 2 )
    s.fail( "'" + h + "' takes at least 2 arguments" );
  std::vector<expr> args;
  for ( std::size_t i = 1; i < s.items.size(); ++i )
    args.push_back( parse_expr( s.items[i] ) );
  return ex::apply( info->kind, std::move( args ) );
}

inline expr parse_expr( std::string_view text ) { return parse_expr( read_sexpr( text ) ); }

inline std::string to_string( const expr& e )
{
  switch ( e->kind )
  {
  case op::constant:
    return e->value.to_string();
  case op::arg_x:
    return "(x " + std::to_string( e->index ) + ")";
  case op::arg_y:
    return "(y " + std::to_string( e->index ) + ")";
  case op::lin:
  {
    std::string s = "(lin " + e->coeffs[0].to_string();
    for ( std::size_t i = 0; i < e->args.size(); ++i )
      s += " " + e->coeffs[i + 1].to_string() + " " + to_string( e->args[i] );
    return s + ")";
  }
  case op::call:
  {
    std::string s = "(call " + e->name;
    for ( const auto& a : e->args )
      s += " " + to_string( a );
    return s + ")";
  }
  default:
  {
    std::string s = std::string( "(" ) + detail::op_name( e->kind );
    for ( const auto& a : e->args )
      s += " " + to_string( a );
    return s + ")";
  }
  }
}

// ---- structural queries ----------------------------------------------------

struct expr_usage
{
  bool uses_x = false;
  bool uses_y = false;
  std::size_t x_arity = 0; ///< one past the largest x index used
  std::size_t y_arity = 0;
  std::size_t nodes = 0;
  std::size_t depth = 0;
  std::vector<std::string> calls;
};

namespace detail
{

inline std::size_t collect_usage( const expr& e, expr_usage& u )
{
  ++u.nodes;
  if ( e->kind == op::arg_x )
  {
    u.uses_x = true;
    u.x_arity = std::max( u.x_arity, e->index + 1 );
  }
  else if ( e->kind == op::arg_y )
  {
    u.uses_y = true;
    u.y_arity = std::max( u.y_arity, e->index + 1 );
  }
  else if ( e->kind == op::call && std::find( u.calls.begin(), u.calls.end(), e->name ) == u.calls.end() )
  {
    u.calls.push_back( e->name );
  }
  std::size_t d = 0;
  for ( const auto& a : e->args )
    d = std::max( d, collect_usage( a, u ) );
  return d + 1;
}

} // namespace detail

inline expr_usage usage( const func& f )
{
  expr_usage u;
  for ( const auto& e : f )
    u.depth = std::max( u.depth, detail::collect_usage( e, u ) );
  return u;
}

inline expr_usage usage( const expr& e ) { return usage( func{ e } ); }

} // namespace satc
