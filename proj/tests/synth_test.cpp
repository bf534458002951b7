#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <satc/circuit.hpp>
#include <satc/machine/run.hpp>
#include <satc/synth.hpp>

#include "big_oracle.hpp"
#include "test_util.hpp"

using namespace satc;
using namespace satc::synth;
using satc::test::big;
using satc::test::to_big;

namespace
{

struct writer
{
  std::vector<bool> v;

  void put( const unat& x, std::size_t w )
  {
    for ( std::size_t i = 0; i < w; ++i )
      v.push_back( x.bit( i ) );
  }
  void put( std::uint64_t x, std::size_t w ) { put( unat( x ), w ); }
  void put_float( const flt& x, std::size_t p_width, std::uint64_t e_max )
  {
    v.push_back( x.negative() );
    put( x.num(), p_width );
    put( x.exp(), bit_width( e_max ) );
  }
};

unat read( const std::vector<bool>& out, std::size_t& pos, std::size_t w )
{
  unat r;
  for ( std::size_t i = 0; i < w; ++i )
    if ( out.at( pos + i ) )
      r.set_bit( i );
  pos += w;
  return r;
}

struct raw_float
{
  bool sign;
  unat p;
  std::uint64_t e;
};

raw_float read_float( const std::vector<bool>& out, std::size_t p_width, std::uint64_t e_max )
{
  std::size_t pos = 1;
  raw_float r{ out.at( 0 ), read( out, pos, p_width ), 0 };
  r.e = read( out, pos, bit_width( e_max ) ).to_u64();
  return r;
}

/// Field-for-field equality with a canonical value.
::testing::AssertionResult same_float( const raw_float& got, const flt& want )
{
  if ( got.sign == want.negative() && got.p == want.num() && got.e == want.exp() )
    return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "got " << ( got.sign ? "-" : "" ) << got.p.to_decimal() << "/2^" << got.e << ", want "
                                       << want.to_string();
}

big big_of( std::uint64_t v ) { return big( v ); }

std::vector<bool> bits_of( std::uint64_t v, std::size_t n )
{
  std::vector<bool> b( n );
  for ( std::size_t i = 0; i < n; ++i )
    b[i] = ( v >> i ) & 1;
  return b;
}

std::size_t popcount( const std::vector<bool>& b ) { return std::count( b.begin(), b.end(), true ); }

/// Canonical float with a p_width-bit numerator and exponent <= e_max.
flt random_canonical( std::mt19937_64& rng, std::size_t p_width, std::uint64_t e_max )
{
  for ( ;; )
  {
    const flt x = test::random_flt( rng, p_width, e_max );
    if ( x.num().bit_length() <= p_width && x.exp() <= e_max )
      return x;
  }
}

} // namespace

TEST( SynthCount, ExactCountIndicatorsExhaustive )
{
  for ( std::size_t n = 1; n <= 10; ++n )
  {
    const auto c = exact_count_circuit( n );
    EXPECT_LE( normalized_metrics( c ).depth, 2u );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t v = 0; v < ( 1u << n ); ++v )
      in.push_back( bits_of( v, n ) );
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
      for ( std::size_t m = 0; m <= n; ++m )
        ASSERT_EQ( out[r][m], popcount( in[r] ) == m ) << "n=" << n;
  }
  const auto c = exact_count_circuit( 6 );
  const auto out = eval( c, { 1, 1, 0, 0, 1, 1 } );
  EXPECT_TRUE( out[4] );
  EXPECT_EQ( popcount( out ), 1u );
  EXPECT_TRUE( eval( c, std::vector<bool>( 6, false ) )[0] );
}

TEST( SynthCount, CountBitsExhaustive )
{
  for ( std::size_t n = 1; n <= 12; ++n )
  {
    const auto c = count_bits_circuit( n );
    EXPECT_EQ( c.outputs().size(), bit_width( n ) );
    EXPECT_LE( normalized_metrics( c ).depth, 3u );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t v = 0; v < ( 1u << n ); ++v )
      in.push_back( bits_of( v, n ) );
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
    {
      std::size_t pos = 0;
      ASSERT_EQ( read( out[r], pos, out[r].size() ).to_u64(), popcount( in[r] ) );
    }
  }
  std::size_t pos = 0;
  EXPECT_EQ( read( eval( count_bits_circuit( 6 ), { 1, 1, 0, 0, 1, 1 } ), pos, 3 ).to_u64(), 4u );
}

TEST( SynthAdder, ExhaustiveSmallWidths )
{
  for ( std::size_t b = 1; b <= 6; ++b )
  {
    const auto c = adder_circuit( b );
    const auto m = normalized_metrics( c );
    EXPECT_LE( m.depth, 4u );
    EXPECT_EQ( m.thresholds, 0u );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t x = 0; x < ( 1u << b ); ++x )
      for ( std::uint64_t y = 0; y < ( 1u << b ); ++y )
      {
        writer w;
        w.put( x, b );
        w.put( y, b );
        in.push_back( w.v );
      }
    const auto out = eval_batch( c, in );
    std::size_t r = 0;
    for ( std::uint64_t x = 0; x < ( 1u << b ); ++x )
      for ( std::uint64_t y = 0; y < ( 1u << b ); ++y, ++r )
      {
        std::size_t pos = 0;
        ASSERT_EQ( to_big( read( out[r], pos, out[r].size() ) ), big_of( x ) + big_of( y ) );
      }
  }
}

TEST( SynthAdder, RandomWideAgainstBignum )
{
  std::mt19937_64 rng( 11 );
  std::size_t cases = 0;
  for ( std::size_t b : { 7u, 13u, 24u, 40u, 64u } )
  {
    const auto c = adder_circuit( b );
    EXPECT_LE( normalized_metrics( c ).depth, 4u );
    std::vector<std::vector<bool>> in;
    std::vector<std::pair<unat, unat>> ops;
    for ( int t = 0; t < 2000; ++t )
    {
      ops.emplace_back( test::random_unat( rng, b ), test::random_unat( rng, b ) );
      writer w;
      w.put( ops.back().first, b );
      w.put( ops.back().second, b );
      in.push_back( w.v );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r, ++cases )
    {
      std::size_t pos = 0;
      ASSERT_EQ( to_big( read( out[r], pos, out[r].size() ) ), to_big( ops[r].first ) + to_big( ops[r].second ) );
    }
  }
  EXPECT_GE( cases, 10000u );
  // x + 0 = x and 5 + 6 = 11
  circuit c( 4 );
  wires x{ c.input( 0 ), c.input( 1 ), c.input( 2 ), c.input( 3 ) };
  c.set_outputs( add( c, x, {} ) );
  for ( std::uint64_t v = 0; v < 16; ++v )
  {
    std::size_t pos = 0;
    EXPECT_EQ( read( eval( c, bits_of( v, 4 ) ), pos, 5 ).to_u64(), v );
  }
  writer w;
  w.put( 5, 3 );
  w.put( 6, 3 );
  std::size_t pos = 0;
  EXPECT_EQ( read( eval( adder_circuit( 3 ), w.v ), pos, 4 ).to_u64(), 11u );
}

TEST( SynthAdder, SubtractionAndCarryIn )
{
  std::mt19937_64 rng( 12 );
  circuit c( 20 );
  wires a, b;
  for ( std::size_t i = 0; i < 10; ++i )
  {
    a.push_back( c.input( i ) );
    b.push_back( c.input( 10 + i ) );
  }
  c.set_outputs( sub( c, a, b ) );
  std::vector<std::vector<bool>> in;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ops;
  for ( int t = 0; t < 10000; ++t )
  {
    std::uint64_t x = rng() % 1024, y = rng() % 1024;
    if ( x < y )
      std::swap( x, y );
    ops.emplace_back( x, y );
    writer w;
    w.put( x, 10 );
    w.put( y, 10 );
    in.push_back( w.v );
  }
  const auto out = eval_batch( c, in );
  for ( std::size_t r = 0; r < in.size(); ++r )
  {
    std::size_t pos = 0;
    ASSERT_EQ( read( out[r], pos, 10 ).to_u64(), ops[r].first - ops[r].second );
  }
}

TEST( SynthCompare, ExhaustiveAndRandom )
{
  for ( std::size_t b = 1; b <= 7; ++b )
  {
    const auto c = comparator_circuit( b );
    const auto m = normalized_metrics( c );
    EXPECT_EQ( m.thresholds, 0u );
    EXPECT_LE( m.depth, 4u );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t v = 0; v < ( 1u << ( 2 * b ) ); ++v )
      in.push_back( bits_of( v, 2 * b ) );
    const auto out = eval_batch( c, in );
    for ( std::uint64_t v = 0; v < in.size(); ++v )
    {
      const std::uint64_t x = v & ( ( 1u << b ) - 1 ), y = v >> b;
      ASSERT_EQ( out[v][0], x >= y );
      ASSERT_EQ( out[v][1], x > y );
      ASSERT_EQ( out[v][2], x == y );
    }
  }
  std::mt19937_64 rng( 13 );
  const auto c = comparator_circuit( 48 );
  std::vector<std::vector<bool>> in;
  std::vector<std::pair<unat, unat>> ops;
  for ( int t = 0; t < 10000; ++t )
  {
    unat x = test::random_unat( rng, 48 );
    unat y = t % 4 == 0 ? x : test::random_unat( rng, 48 );
    ops.emplace_back( x, y );
    writer w;
    w.put( x, 48 );
    w.put( y, 48 );
    in.push_back( w.v );
  }
  const auto out = eval_batch( c, in );
  for ( std::size_t r = 0; r < in.size(); ++r )
  {
    const big x = to_big( ops[r].first ), y = to_big( ops[r].second );
    ASSERT_EQ( out[r][0], x >= y );
    ASSERT_EQ( out[r][1], x > y );
    ASSERT_EQ( out[r][2], x == y );
  }
}

TEST( SynthMaxSelect, FirstWinnerAgainstLinearScan )
{
  {
    const auto c = max_select_circuit( 3, 3 );
    writer w;
    for ( std::uint64_t v : { 3u, 7u, 7u } )
      w.put( v, 3 );
    const auto out = eval( c, w.v );
    std::size_t pos = 0;
    EXPECT_EQ( read( out, pos, 3 ).to_u64(), 7u );
    EXPECT_EQ( std::vector<bool>( out.begin() + 3, out.end() ), ( std::vector<bool>{ 0, 1, 0 } ) );
    const auto one = max_select_circuit( 1, 4 );
    EXPECT_EQ( eval( one, bits_of( 9, 4 ) ), ( std::vector<bool>{ 1, 0, 0, 1, 1 } ) );
  }
  std::mt19937_64 rng( 14 );
  std::size_t cases = 0;
  while ( cases < 10000 )
  {
    const std::size_t n = 1 + rng() % 32, b = 1 + rng() % 6;
    const auto c = max_select_circuit( n, b );
    EXPECT_EQ( normalized_metrics( c ).thresholds, 0u );
    std::vector<std::vector<bool>> in;
    std::vector<std::vector<std::uint64_t>> vals;
    for ( int t = 0; t < 500; ++t, ++cases )
    {
      writer w;
      vals.emplace_back();
      for ( std::size_t j = 0; j < n; ++j )
      {
        vals.back().push_back( rng() % ( 1u << b ) );
        w.put( vals.back().back(), b );
      }
      in.push_back( w.v );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
    {
      std::size_t best = 0;
      for ( std::size_t j = 1; j < n; ++j )
        if ( vals[r][j] > vals[r][best] )
          best = j;
      std::size_t pos = 0;
      ASSERT_EQ( read( out[r], pos, b ).to_u64(), vals[r][best] );
      for ( std::size_t j = 0; j < n; ++j )
        ASSERT_EQ( out[r][b + j], j == best );
    }
  }
}

TEST( SynthItadd, SmallExamples )
{
  writer w;
  for ( std::uint64_t v : { 1u, 2u, 3u } )
    w.put( v, 2 );
  std::size_t pos = 0;
  EXPECT_EQ( read( eval( itadd_circuit( 3, 2 ), w.v ), pos, 4 ).to_u64(), 6u );
  const auto ones = itadd_circuit( 64, 1 );
  pos = 0;
  EXPECT_EQ( read( eval( ones, std::vector<bool>( 64, true ) ), pos, ones.outputs().size() ).to_u64(), 64u );
}

TEST( SynthItadd, RandomAgainstBignumSum )
{
  std::mt19937_64 rng( 15 );
  std::size_t cases = 0;
  while ( cases < 10000 )
  {
    const std::size_t n = 1 + rng() % 64, b = 1 + rng() % 24;
    const auto policy = rng() % 4 == 0 ? sum_policy::tree : sum_policy::threshold;
    const auto c = itadd_circuit( n, b, policy );
    std::vector<std::vector<bool>> in;
    std::vector<big> sums;
    for ( int t = 0; t < 256; ++t, ++cases )
    {
      writer w;
      big s = 0;
      for ( std::size_t j = 0; j < n; ++j )
      {
        const unat v = test::random_unat( rng, b );
        s += to_big( v );
        w.put( v, b );
      }
      sums.push_back( s );
      in.push_back( w.v );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
    {
      std::size_t pos = 0;
      ASSERT_EQ( to_big( read( out[r], pos, out[r].size() ) ), sums[r] ) << "n=" << n << " B=" << b;
    }
  }
}

TEST( SynthItadd, DepthIsConstantAcrossN )
{
  for ( std::size_t b : { 1u, 4u, 8u } )
  {
    std::vector<std::size_t> depths;
    for ( std::size_t n : { 4u, 8u, 16u, 32u, 64u } )
      depths.push_back( normalized_metrics( itadd_circuit( n, b ) ).depth );
    for ( auto d : depths )
      EXPECT_EQ( d, depths[0] ) << "B=" << b;
  }
  EXPECT_EQ( normalized_metrics( itadd_circuit( 5, 3, sum_policy::tree ) ).thresholds, 0u );
}

TEST( SynthMultiply, ExhaustiveAndRandom )
{
  for ( std::size_t b = 1; b <= 5; ++b )
  {
    const auto c = multiplier_circuit( b );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t v = 0; v < ( 1u << ( 2 * b ) ); ++v )
      in.push_back( bits_of( v, 2 * b ) );
    const auto out = eval_batch( c, in );
    for ( std::uint64_t v = 0; v < in.size(); ++v )
    {
      std::size_t pos = 0;
      ASSERT_EQ( read( out[v], pos, 2 * b ).to_u64(), ( v & ( ( 1u << b ) - 1 ) ) * ( v >> b ) );
    }
  }
  std::mt19937_64 rng( 16 );
  std::size_t cases = 0;
  for ( std::size_t b : { 6u, 9u, 12u, 16u } )
  {
    for ( auto policy : { sum_policy::threshold, sum_policy::tree } )
    {
      const auto c = multiplier_circuit( b, policy );
      std::vector<std::vector<bool>> in;
      std::vector<big> want;
      for ( int t = 0; t < 1280; ++t, ++cases )
      {
        const unat x = test::random_unat( rng, b ), y = test::random_unat( rng, b );
        writer w;
        w.put( x, b );
        w.put( y, b );
        in.push_back( w.v );
        want.push_back( to_big( x ) * to_big( y ) );
      }
      const auto out = eval_batch( c, in );
      for ( std::size_t r = 0; r < in.size(); ++r )
      {
        std::size_t pos = 0;
        ASSERT_EQ( to_big( read( out[r], pos, 2 * b ) ), want[r] );
      }
    }
  }
  EXPECT_GE( cases, 10000u );
}

TEST( SynthMultiply, ByConstantIsThresholdFree )
{
  std::mt19937_64 rng( 17 );
  for ( int t = 0; t < 20; ++t )
  {
    const unat k = test::random_unat( rng, 1 + rng() % 20 );
    circuit c( 12 );
    wires a;
    for ( std::size_t i = 0; i < 12; ++i )
      a.push_back( c.input( i ) );
    c.set_outputs( resize( c, mul_const( c, a, k ), 12 + k.bit_length() ) );
    EXPECT_EQ( measure( c ).thresholds, 0u );
    std::vector<std::vector<bool>> in;
    std::vector<std::uint64_t> xs;
    for ( int s = 0; s < 500; ++s )
    {
      xs.push_back( rng() % 4096 );
      in.push_back( bits_of( xs.back(), 12 ) );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
    {
      std::size_t pos = 0;
      ASSERT_EQ( to_big( read( out[r], pos, out[r].size() ) ), big_of( xs[r] ) * to_big( k ) );
    }
  }
}

TEST( SynthShift, BarrelShiftMatchesPowerOfTwo )
{
  {
    const auto c = barrel_shift_circuit( 3, 3 );
    writer w;
    w.put( 5, 3 );
    w.put( 0, 2 );
    std::size_t pos = 0;
    EXPECT_EQ( read( eval( c, w.v ), pos, 6 ).to_u64(), 5u );
    writer w1;
    w1.put( 1, 3 );
    w1.put( 3, 2 );
    pos = 0;
    EXPECT_EQ( read( eval( c, w1.v ), pos, 6 ).to_u64(), 8u );
  }
  std::mt19937_64 rng( 18 );
  for ( std::uint64_t max_shift : { 1u, 5u, 12u, 31u } )
  {
    const std::size_t b = 10;
    const auto c = barrel_shift_circuit( b, max_shift );
    const auto m = normalized_metrics( c );
    EXPECT_EQ( m.thresholds, 0u );
    EXPECT_LE( m.depth, 3u );
    std::vector<std::vector<bool>> in;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ops;
    for ( int t = 0; t < 2500; ++t )
    {
      ops.emplace_back( rng() % 1024, rng() % ( max_shift + 1 ) );
      writer w;
      w.put( ops.back().first, b );
      w.put( ops.back().second, bit_width( max_shift ) );
      in.push_back( w.v );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
    {
      std::size_t pos = 0;
      ASSERT_EQ( to_big( read( out[r], pos, b + max_shift ) ), big_of( ops[r].first ) << ops[r].second );
    }
  }
  // right shifts
  circuit c( 14 );
  wires x, s;
  for ( std::size_t i = 0; i < 10; ++i )
    x.push_back( c.input( i ) );
  for ( std::size_t i = 10; i < 14; ++i )
    s.push_back( c.input( i ) );
  c.set_outputs( shift_right( c, x, s, 15 ) );
  for ( std::uint64_t v = 0; v < ( 1u << 14 ); v += 7 )
  {
    std::size_t pos = 0;
    ASSERT_EQ( read( eval( c, bits_of( v, 14 ) ), pos, 10 ).to_u64(), ( v & 1023 ) >> ( v >> 10 ) );
  }
}

TEST( SynthFloat, CanonicalizeAndSmallSums )
{
  const auto c = float_sum_circuit( 3, 3, 2 );
  writer w;
  w.put_float( flt( 1, 1 ), 3, 2 );
  w.put_float( flt( 1, 2 ), 3, 2 );
  w.put_float( flt( 1, 2 ), 3, 2 );
  const std::size_t pw = c.outputs().size() - 1 - bit_width( 2 );
  EXPECT_TRUE( same_float( read_float( eval( c, w.v ), pw, 2 ), flt( 1 ) ) );
  const auto c2 = float_sum_circuit( 2, 2, 1 );
  writer w2;
  w2.put_float( flt( 1, 1 ), 2, 1 );
  w2.put_float( flt( 1, 1, true ), 2, 1 );
  EXPECT_TRUE( same_float( read_float( eval( c2, w2.v ), c2.outputs().size() - 2, 1 ), flt() ) );

  // canonicalize on every raw (sign, p, e) with 5-bit p and e <= 6
  circuit cc( 1 + 5 + 3 );
  std::size_t next = 0;
  fpack x;
  x.sign = cc.input( next++ );
  for ( int i = 0; i < 5; ++i )
    x.p.push_back( cc.input( next++ ) );
  for ( int i = 0; i < 3; ++i )
    x.e.push_back( cc.input( next++ ) );
  x.e_max = 6;
  cc.set_outputs( flatten( canonicalize( cc, x ) ) );
  EXPECT_LE( normalized_metrics( cc ).depth, 4u );
  for ( std::uint64_t v = 0; v < ( 1u << 9 ); ++v )
  {
    const bool sign = v & 1;
    const std::uint64_t p = ( v >> 1 ) & 31, e = v >> 6;
    if ( e > 6 )
      continue;
    ASSERT_TRUE( same_float( read_float( eval( cc, bits_of( v, 9 ) ), 5, 6 ), flt( unat( p ), e, sign ) ) );
  }
}

TEST( SynthFloat, FloatSumMatchesFoldedAddition )
{
  std::mt19937_64 rng( 19 );
  std::size_t cases = 0;
  while ( cases < 10000 )
  {
    const std::size_t n = 1 + rng() % 32, pw = 1 + rng() % 6;
    const std::uint64_t e_max = rng() % 6;
    const auto policy = n <= 8 && rng() % 2 ? sum_policy::tree : sum_policy::threshold;
    const auto c = float_sum_circuit( n, pw, e_max, policy );
    const std::size_t out_pw = c.outputs().size() - 1 - bit_width( e_max );
    EXPECT_LE( out_pw, pw + e_max + bit_width( n - 1 ) );
    std::vector<std::vector<bool>> in;
    std::vector<flt> want;
    for ( int t = 0; t < 200; ++t, ++cases )
    {
      writer w;
      flt s;
      std::vector<flt> terms;
      for ( std::size_t j = 0; j < n; ++j )
      {
        const flt v = random_canonical( rng, pw, e_max );
        terms.push_back( v );
        s = flt_add( s, v );
        w.put_float( v, pw, e_max );
      }
      // the exact sum respects the size bound on sums
      const auto lb = check_lin_bits( terms, s );
      ASSERT_EQ( lb.violations, 0u );
      want.push_back( s );
      in.push_back( w.v );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
      ASSERT_TRUE( same_float( read_float( out[r], out_pw, e_max ), want[r] ) ) << "n=" << n << " pw=" << pw << " e_max=" << e_max;
  }
}

TEST( SynthFloat, DivideByCount )
{
  {
    const auto c = divide_by_count_circuit( 2, 2, 3 );
    writer w;
    w.put_float( flt( 3, 2 ), 2, 2 );
    w.put( 0b010, 3 );
    const std::uint64_t e_out = 2 + bit_width( 3 );
    EXPECT_TRUE( same_float( read_float( eval( c, w.v ), c.outputs().size() - 1 - bit_width( e_out ), e_out ), flt( 3, 3 ) ) );
    writer w3;
    w3.put_float( flt( 1 ), 2, 2 );
    w3.put( 0b100, 3 );
    EXPECT_TRUE( same_float( read_float( eval( c, w3.v ), c.outputs().size() - 1 - bit_width( e_out ), e_out ), flt( 1, 2 ) ) );
    EXPECT_EQ( flt_div( flt( 1 ), flt( 3 ) ), flt( 1, 2 ) );
  }
  std::mt19937_64 rng( 20 );
  std::size_t cases = 0;
  while ( cases < 10000 )
  {
    const std::size_t n = 1 + rng() % 40, pw = 1 + rng() % 8;
    const std::uint64_t e_max = rng() % 7;
    const auto c = divide_by_count_circuit( pw, e_max, n );
    const std::uint64_t e_out = e_max + bit_width( n );
    const std::size_t out_pw = c.outputs().size() - 1 - bit_width( e_out );
    std::vector<std::vector<bool>> in;
    std::vector<flt> want;
    for ( int t = 0; t < 250; ++t, ++cases )
    {
      const flt s = random_canonical( rng, pw, e_max );
      const std::size_t m = 1 + rng() % n;
      writer w;
      w.put_float( s, pw, e_max );
      for ( std::size_t k = 1; k <= n; ++k )
        w.v.push_back( k == m );
      in.push_back( w.v );
      want.push_back( flt_div( s, flt( m ) ) );
    }
    const auto out = eval_batch( c, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
      ASSERT_TRUE( same_float( read_float( out[r], out_pw, e_out ), want[r] ) );
  }
}

namespace
{

/// Two float operands of the given widths and one gadget producing a pack.
template<class F>
void check_binary_float( std::size_t pw, std::uint64_t e_max, F&& build, const std::function<flt( const flt&, const flt& )>& oracle,
                         std::mt19937_64& rng, int count )
{
  circuit c( 2 * float_input_width( pw, e_max ) );
  c.set_folding( fold_mode::keep_depth );
  std::size_t next = 0;
  auto take = [&] {
    fpack x;
    x.sign = c.input( next++ );
    for ( std::size_t i = 0; i < pw; ++i )
      x.p.push_back( c.input( next++ ) );
    for ( std::size_t i = 0; i < bit_width( e_max ); ++i )
      x.e.push_back( c.input( next++ ) );
    x.e_max = e_max;
    return x;
  };
  const auto a = take();
  const auto b = take();
  const fpack r = build( c, a, b );
  c.set_outputs( flatten( r ) );
  std::vector<std::vector<bool>> in;
  std::vector<flt> want;
  for ( int t = 0; t < count; ++t )
  {
    const flt x = random_canonical( rng, pw, e_max ), y = random_canonical( rng, pw, e_max );
    writer w;
    w.put_float( x, pw, e_max );
    w.put_float( y, pw, e_max );
    in.push_back( w.v );
    want.push_back( oracle( x, y ) );
  }
  const auto out = eval_batch( c, in );
  for ( std::size_t t = 0; t < in.size(); ++t )
    ASSERT_TRUE( same_float( read_float( out[t], r.p.size(), r.e_max ), want[t] ) );
}

} // namespace

TEST( SynthFloat, ProductsComparisonsAndSelection )
{
  std::mt19937_64 rng( 21 );
  for ( std::size_t pw : { 1u, 3u, 6u } )
    for ( std::uint64_t e_max : { 0u, 2u, 5u } )
    {
      check_binary_float( pw, e_max, []( circuit& c, const fpack& a, const fpack& b ) { return fmul( c, a, b ); }, flt_mul, rng, 1000 );
      check_binary_float( pw, e_max, []( circuit& c, const fpack& a, const fpack& b ) { return fmul( c, a, b, sum_policy::tree ); }, flt_mul,
                          rng, 300 );
      check_binary_float(
          pw, e_max,
          []( circuit& c, const fpack& a, const fpack& b ) {
            const auto r = fcompare( c, a, b );
            return from_bit( c, r.gt );
          },
          []( const flt& x, const flt& y ) { return flt( x > y ? 1u : 0u ); }, rng, 1000 );
      check_binary_float(
          pw, e_max,
          []( circuit& c, const fpack& a, const fpack& b ) {
            const auto r = fcompare( c, a, b );
            return from_bit( c, c.add_or( { r.gt, r.eq } ) );
          },
          []( const flt& x, const flt& y ) { return flt( x >= y ? 1u : 0u ); }, rng, 1000 );
      check_binary_float(
          pw, e_max, []( circuit& c, const fpack& a, const fpack& b ) { return fselect( c, nonzero( c, a ), frelu( c, b ), fneg( c, a ) ); },
          []( const flt& x, const flt& y ) { return x.is_zero() ? -x : ( y.negative() ? flt() : y ); }, rng, 1000 );
    }
}

TEST( SynthFloat, ConstantOperands )
{
  std::mt19937_64 rng( 22 );
  for ( int t = 0; t < 30; ++t )
  {
    const flt k = random_canonical( rng, 1 + rng() % 6, rng() % 4 );
    const flt d = k.is_zero() ? flt( 3 ) : k;
    check_binary_float(
        4, 3, [&]( circuit& c, const fpack& a, const fpack& ) { return fmul_const( c, a, k ); },
        [&]( const flt& x, const flt& ) { return flt_mul( x, k ); }, rng, 200 );
    check_binary_float(
        4, 3, [&]( circuit& c, const fpack& a, const fpack& ) { return fdiv_const( c, a, d ); },
        [&]( const flt& x, const flt& ) { return flt_div( x, d ); }, rng, 200 );
  }
  for ( int t = 0; t < 200; ++t )
  {
    circuit c( 1 );
    const flt k = random_canonical( rng, 8, 6 );
    const auto pk = fconst( c, k );
    c.set_outputs( flatten( pk ) );
    EXPECT_TRUE( same_float( read_float( eval( c, { false } ), pk.p.size(), pk.e_max ), k ) );
  }
}

TEST( SynthLookup, DnfDepthAndSizeBound )
{
  lookup_spec x{ 2, 1, { { 0 }, { 1 }, { 1 }, { 0 } } };
  const auto c = dnf_lookup( x );
  EXPECT_EQ( measure( c ).depth, 3u );
  EXPECT_LE( measure( c ).size, 7u );
  for ( std::uint64_t v = 0; v < 4; ++v )
    EXPECT_EQ( eval( c, bits_of( v, 2 ) )[0], ( ( v & 1 ) != ( v >> 1 ) ) );

  for ( bool value : { false, true } )
  {
    lookup_spec k{ 3, 1, std::vector<std::vector<bool>>( 8, { value } ) };
    const auto ck = dnf_lookup( k );
    EXPECT_EQ( measure( ck ).depth, 3u );
    EXPECT_LE( measure( ck ).size, ( 8u + 3 + 1 ) * 1 );
    for ( std::uint64_t v = 0; v < 8; ++v )
      EXPECT_EQ( eval( ck, bits_of( v, 3 ) )[0], value );
  }

  std::mt19937_64 rng( 23 );
  for ( int t = 0; t < 200; ++t )
  {
    const std::size_t ci = 1 + rng() % 10, d = 1 + rng() % 4;
    const int density = static_cast<int>( rng() % 5 );
    lookup_spec s{ ci, d, {} };
    for ( std::size_t r = 0; r < ( std::size_t( 1 ) << ci ); ++r )
    {
      std::vector<bool> row( d );
      for ( std::size_t j = 0; j < d; ++j )
        row[j] = density == 0 ? false : density == 4 ? true : static_cast<int>( rng() % 4 ) < density;
      s.rows.push_back( row );
    }
    const auto cl = dnf_lookup( s );
    const auto m = measure( cl );
    ASSERT_EQ( m.depth, 3u );
    ASSERT_LE( m.size, ( ( std::size_t( 1 ) << ci ) + ci + 1 ) * d );
    std::vector<std::vector<bool>> in;
    for ( std::uint64_t v = 0; v < s.rows.size(); ++v )
      in.push_back( bits_of( v, ci ) );
    const auto out = eval_batch( cl, in );
    for ( std::size_t r = 0; r < in.size(); ++r )
      ASSERT_EQ( out[r], s.rows[r] );
  }
  lookup_spec wide{ 17, 1, {} };
  EXPECT_THROW( dnf_lookup( wide ), domain_error );
}

TEST( SynthLookup, InCircuitLookupMatchesTable )
{
  std::mt19937_64 rng( 24 );
  std::vector<std::vector<bool>> rows( 64, std::vector<bool>( 3 ) );
  for ( auto& r : rows )
    for ( std::size_t j = 0; j < 3; ++j )
      r[j] = rng() & 1;
  circuit c( 6 );
  wires in;
  for ( std::size_t i = 0; i < 6; ++i )
    in.push_back( c.input( i ) );
  c.set_outputs( lookup_into( c, in, rows, 3 ) );
  for ( std::uint64_t v = 0; v < 64; ++v )
    ASSERT_EQ( eval( c, bits_of( v, 6 ) ), rows[v] );
}

TEST( SynthGadgets, ThresholdFreeShapesAndManifests )
{
  EXPECT_EQ( normalized_metrics( comparator_circuit( 12 ) ).thresholds, 0u );
  EXPECT_EQ( normalized_metrics( max_select_circuit( 6, 5 ) ).thresholds, 0u );
  EXPECT_EQ( normalized_metrics( adder_circuit( 16 ) ).thresholds, 0u );
  EXPECT_EQ( normalized_metrics( barrel_shift_circuit( 8, 9 ) ).thresholds, 0u );
  EXPECT_GT( normalized_metrics( itadd_circuit( 8, 4 ) ).thresholds, 0u );
  const auto ms = gadget_manifests( 8, 4 );
  EXPECT_EQ( ms.size(), 10u );
  for ( const auto& m : ms )
  {
    const auto j = m.to_json();
    EXPECT_EQ( j["name"], m.name );
    EXPECT_GT( j["size"].get<std::size_t>(), 0u );
    EXPECT_TRUE( j.contains( "threshold_count" ) );
  }
  // a gadget serializes and reloads unchanged in behaviour
  const auto c = adder_circuit( 3 );
  const auto back = from_json( to_json( c ) );
  for ( std::uint64_t v = 0; v < 64; ++v )
    ASSERT_EQ( eval( back, bits_of( v, 6 ) ), eval( c, bits_of( v, 6 ) ) );
}
