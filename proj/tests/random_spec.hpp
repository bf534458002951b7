#pragma once

#include <memory>
#include <random>
#include <string>

#include <satc/machine.hpp>

namespace satc::gen
{

/// Small random float specs over {0, 1}: every operation the compiler
/// supports structurally, small dyadic constants, two layers.
class spec_generator
{
public:
  explicit spec_generator( std::uint64_t seed ) : rng_( seed ) {}

  transformer_spec make( attention_kind kind, std::size_t layers = 2, std::size_t heads = 2, std::size_t block = 2 )
  {
    transformer_spec sp;
    sp.name = "random";
    sp.alphabet = { "0", "1" };
    sp.type = datatype::flt;
    sp.heads = heads;
    sp.width = heads * block;
    sp.host = std::make_shared<const host_registry>( standard_host() );
    const std::size_t m = sp.width;
    for ( std::size_t k = 0; k < m; ++k )
      sp.embedding.push_back( expr_over( 2, 1, 1 ) );
    for ( std::size_t l = 0; l < layers; ++l )
    {
      layer_spec ls;
      for ( std::size_t h = 0; h < heads; ++h )
        ls.heads.push_back( { kind, expr_over( m, m, 1 ) } );
      for ( std::size_t k = 0; k < m; ++k )
        ls.activation.push_back( expr_over( m, m, 2 ) );
      sp.layers.push_back( std::move( ls ) );
    }
    for ( std::size_t k = 0; k < m; ++k )
      sp.classifier_w.push_back( small_constant() );
    sp.classifier_b = small_constant();
    sp.validate();
    return sp;
  }

private:
  std::size_t pick( std::size_t k ) { return std::uniform_int_distribution<std::size_t>( 0, k - 1 )( rng_ ); }

  rat small_constant()
  {
    static const rat values[] = { rat( 0u ), rat( 1u ), rat::integer( -1 ), rat( 1u, 2u ), rat( 3u ), rat::integer( -2 ), rat( 3u, 4u ) };
    return values[pick( std::size( values ) )];
  }

  expr leaf( std::size_t nx, std::size_t ny )
  {
    switch ( pick( 3 ) )
    {
    case 0: return ex::x( pick( nx ) );
    case 1: return ex::y( pick( ny ) );
    default: return ex::c( small_constant() );
    }
  }

  expr expr_over( std::size_t nx, std::size_t ny, std::size_t depth )
  {
    using namespace ex;
    if ( depth == 0 )
      return leaf( nx, ny );
    auto sub_expr = [&] { return expr_over( nx, ny, depth - 1 ); };
    switch ( pick( 13 ) )
    {
    case 0: return add( sub_expr(), sub_expr() );
    case 1: return ex::sub( sub_expr(), sub_expr() );
    case 2: return mul( sub_expr(), sub_expr() );
    case 3: return neg( sub_expr() );
    case 4: return relu( sub_expr() );
    case 5: return gt( sub_expr(), sub_expr() );
    case 6: return ge( sub_expr(), sub_expr() );
    case 7: return eq( sub_expr(), sub_expr() );
    case 8: return select( sub_expr(), sub_expr(), sub_expr() );
    case 9: return lin( small_constant(), { { small_constant(), sub_expr() }, { small_constant(), sub_expr() } } );
    case 10: return div( sub_expr(), c( pick( 2 ) ? rat( 3u ) : rat( 1u, 2u ) ) );
    case 11: return num( sub_expr() );
    default: return den( sub_expr() );
    }
  }

  std::mt19937_64 rng_;
};

} // namespace satc::gen
