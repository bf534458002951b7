#pragma once

#include <span>
#include <string>
#include <vector>

#include "../bitnum/flt.hpp"
#include "../bitnum/rat.hpp"
#include "expr.hpp"
#include "host.hpp"

namespace satc
{

/// Datatype-specific arithmetic.  Addition, multiplication and comparison are
/// the operators of the type; division and square root differ.
template<class D>
struct arith;

template<>
struct arith<rat>
{
  static constexpr const char* name = "rational";
  static rat lift( const rat& r ) { return r; }
  static rat to_rat( const rat& r ) { return r; }
  static rat div( const rat& a, const rat& b ) { return rat_div( a, b ); }
  static rat sqrt( const rat& a ) { return rat_sqrt( a ); }
};

template<>
struct arith<flt>
{
  static constexpr const char* name = "float";
  static flt lift( const rat& r )
  {
    auto f = flt::from_rat( r );
    if ( !f )
      throw eval_error( "value " + r.to_string() + " is not representable as a float" );
    return *f;
  }
  static rat to_rat( const flt& f ) { return f.to_rat(); }
  static flt div( const flt& a, const flt& b ) { return flt_div( a, b ); }
  static flt sqrt( const flt& a ) { return flt_sqrt( a ); }
};

namespace detail
{

template<class D>
class evaluator
{
public:
  evaluator( std::span<const D> x, std::span<const D> y, const host_registry* host ) : x_( x ), y_( y ), host_( host ) {}

  D operator()( const expr& e ) const
  {
    using A = arith<D>;
    const auto& a = e->args;
    switch ( e->kind )
    {
    case op::constant:
      return A::lift( e->value );
    case op::arg_x:
      if ( e->index >= x_.size() )
        throw eval_error( "arity mismatch: (x " + std::to_string( e->index ) + ") with " + std::to_string( x_.size() ) + " arguments" );
      return x_[e->index];
    case op::arg_y:
      if ( e->index >= y_.size() )
        throw eval_error( "arity mismatch: (y " + std::to_string( e->index ) + ") with " + std::to_string( y_.size() ) + " arguments" );
      return y_[e->index];
    case op::add:
    {
      D s = ( *this )( a[0] );
      for ( std::size_t i = 1; i < a.size(); ++i )
        s = s + ( *this )( a[i] );
      return s;
    }
    case op::sub: return ( *this )( a[0] ) - ( *this )( a[1] );
    case op::mul: return ( *this )( a[0] ) * ( *this )( a[1] );
    case op::div: return A::div( ( *this )( a[0] ), ( *this )( a[1] ) );
    case op::neg: return -( *this )( a[0] );
    case op::sqrt: return A::sqrt( ( *this )( a[0] ) );
    case op::relu:
    {
      D v = ( *this )( a[0] );
      return v.negative() ? D() : v;
    }
    case op::gt: return D( ( *this )( a[0] ) > ( *this )( a[1] ) ? 1u : 0u );
    case op::ge: return D( ( *this )( a[0] ) >= ( *this )( a[1] ) ? 1u : 0u );
    case op::eq: return D( ( *this )( a[0] ) == ( *this )( a[1] ) ? 1u : 0u );
    case op::select: return ( *this )( a[0] ).is_zero() ? ( *this )( a[2] ) : ( *this )( a[1] );
    case op::lin:
    {
      D s = A::lift( e->coeffs[0] );
      for ( std::size_t i = 0; i < a.size(); ++i )
        s = s + A::lift( e->coeffs[i + 1] ) * ( *this )( a[i] );
      return s;
    }
    case op::num: return A::lift( rat( A::to_rat( ( *this )( a[0] ) ).num(), unat( 1 ) ) );
    case op::den: return A::lift( rat( A::to_rat( ( *this )( a[0] ) ).den(), unat( 1 ) ) );
    case op::idiv:
    {
      const rat q = rat_div( A::to_rat( ( *this )( a[0] ) ), A::to_rat( ( *this )( a[1] ) ) );
      return A::lift( rat( q.num() / q.den(), unat( 1 ), q.negative() ) );
    }
    case op::divides:
    {
      const rat d = A::to_rat( ( *this )( a[0] ) );
      const rat v = A::to_rat( ( *this )( a[1] ) );
      const bool yes = !d.is_zero() && d.is_integer() && v.is_integer() && ( v.num() % d.num() ).is_zero();
      return D( yes ? 1u : 0u );
    }
    case op::call:
    {
      if ( !host_ )
        throw eval_error( "host function '" + e->name + "' called without a registry" );
      std::vector<rat> args;
      args.reserve( a.size() );
      for ( const auto& arg : a )
        args.push_back( A::to_rat( ( *this )( arg ) ) );
      return A::lift( host_->call( e->name, args ) );
    }
    }
    throw eval_error( "corrupt expression node" );
  }

private:
  std::span<const D> x_;
  std::span<const D> y_;
  const host_registry* host_;
};

} // namespace detail

/// Evaluate one scalar expression.  (select c a b) only evaluates the chosen branch.
template<class D>
D eval_expr( const expr& e, std::span<const D> x, std::span<const D> y = {}, const host_registry* host = nullptr )
{
  return detail::evaluator<D>( x, y, host )( e );
}

template<class D>
std::vector<D> eval_func( const func& f, std::span<const D> x, std::span<const D> y = {}, const host_registry* host = nullptr )
{
  detail::evaluator<D> ev( x, y, host );
  std::vector<D> out;
  out.reserve( f.size() );
  for ( const auto& e : f )
    out.push_back( ev( e ) );
  return out;
}

} // namespace satc
