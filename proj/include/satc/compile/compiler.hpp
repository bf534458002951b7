#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../circuit/eval.hpp"
#include "../error.hpp"
#include "../machine/host.hpp"
#include "../circuit/metrics.hpp"
#include "../machine/attention.hpp"
#include "../machine/eval.hpp"
#include "../machine/spec.hpp"
#include "../synth/arith.hpp"
#include "../synth/float.hpp"
#include "../synth/lookup.hpp"
#include "plan.hpp"

namespace satc
{

/// Operations without a structural gadget (division by a non-constant,
/// square root, idiv, divides, host calls) become truth-table lookups over
/// their operand wires when `fallback` is on and the operands fit the cap.
/// `cross_check` additionally checks every structurally compiled operation
/// whose operands fit the cap against its truth table on all canonical
/// operand values.
enum class lookup_mode
{
  off,
  fallback,
  cross_check
};

struct compile_options
{
  lookup_mode lookup = lookup_mode::fallback;
  std::size_t lookup_cap = 14;
  synth::sum_policy sums = synth::sum_policy::threshold;
  bool value_outputs = false; ///< also expose the final value vector at position 1
  fold_mode folding = fold_mode::keep_depth;
};

struct compiled
{
  std::string name;
  std::size_t n = 0;
  circuit c;        ///< negations at the leaves; output 0 is the accept bit
  width_plan plan;  ///< widths realized for every role
  metrics stats;
  std::size_t lookups = 0;
  std::size_t cross_checks = 0;

  nlohmann::json manifest() const
  {
    return { { "spec", name },
             { "n", n },
             { "inputs", c.num_inputs() },
             { "outputs", c.outputs().size() },
             { "size", stats.size },
             { "depth", stats.depth },
             { "threshold_count", stats.thresholds },
             { "max_fanin", stats.max_fanin },
             { "nodes", stats.nodes },
             { "lookups", lookups },
             { "cross_checks", cross_checks },
             { "width_plan", plan.to_json() } };
  }
};

/// Input bit of token sigma at 1-based position i: (i - 1)|alphabet| + sigma.
inline std::vector<bool> encode_input( const transformer_spec& sp, const std::vector<std::size_t>& tokens )
{
  std::vector<bool> bits( tokens.size() * sp.alphabet.size(), false );
  for ( std::size_t i = 0; i < tokens.size(); ++i )
    bits[i * sp.alphabet.size() + tokens[i]] = true;
  return bits;
}

namespace detail
{

/// A compile-time value: a known constant or a wire pack.
struct sym
{
  std::optional<flt> k;
  synth::fpack w;

  static sym constant( flt v ) { return { std::move( v ), {} }; }
  static sym wires( synth::fpack p ) { return { std::nullopt, std::move( p ) }; }
  bool is_const() const { return k.has_value(); }
};

/// Evaluate one node on constant operands with the machine's semantics.
inline flt fold_node( const expr& e, const std::vector<flt>& args, const host_registry* host )
{
  expr_node copy = *e;
  copy.args.clear();
  for ( const auto& a : args )
    copy.args.push_back( ex::c( a.to_rat() ) );
  return eval_expr<flt>( satc::detail::make( std::move( copy ) ), {}, {}, host );
}

inline bool canonical_fields( bool sign, const unat& p, std::uint64_t e, std::uint64_t e_max )
{
  if ( e > e_max )
    return false;
  if ( p.is_zero() )
    return !sign && e == 0;
  return e == 0 || p.is_odd();
}

/// Decode a pack laid out as sign, p, e from bit `pos` of a row index.
inline std::optional<flt> decode_row( std::uint64_t row, std::size_t& pos, const synth::fpack& shape )
{
  auto bit = [&]( std::size_t i ) { return ( ( row >> i ) & 1u ) != 0; };
  const bool sign = bit( pos++ );
  unat p;
  for ( std::size_t i = 0; i < shape.p.size(); ++i )
    if ( bit( pos++ ) )
      p.set_bit( i );
  std::uint64_t e = 0;
  for ( std::size_t i = 0; i < shape.e.size(); ++i )
    if ( bit( pos++ ) )
      e |= std::uint64_t( 1 ) << i;
  if ( !canonical_fields( sign, p, e, shape.e_max ) )
    return std::nullopt;
  return flt( p, e, sign );
}

class compiler
{
public:
  compiler( const transformer_spec& sp, std::size_t n, const width_plan* plan, const compile_options& opt )
      : sp_( sp ), n_( n ), plan_( plan ), opt_( opt ), c_( n * sp.alphabet.size() )
  {
    c_.set_folding( opt.folding );
    realized_.mode = plan ? plan->mode : plan_mode::analytic;
    realized_.n = n;
  }

  compiled run()
  {
    check_spec();
    const std::size_t k = sp_.alphabet.size(), L = sp_.layers.size();
    std::vector<std::vector<sym>> v( n_ );
    for ( std::size_t i = 0; i < n_; ++i )
    {
      std::vector<sym> x;
      for ( std::size_t s = 0; s < k; ++s )
        x.push_back( sym::wires( synth::from_bit( c_, c_.input( i * k + s ) ) ) );
      const std::vector<sym> y{ sym::constant( flt( static_cast<std::uint64_t>( i + 1 ) ) ) };
      for ( std::size_t comp = 0; comp < sp_.embedding.size(); ++comp )
        v[i].push_back( role( eval( sp_.embedding[comp], x, y ), role_value( 0, comp ) ) );
    }
    for ( std::size_t l = 1; l <= L; ++l )
    {
      const auto& ls = sp_.layers[l - 1];
      const std::size_t positions = l == L ? 1 : n_;
      std::vector<std::vector<sym>> next( positions );
      std::vector<std::vector<sym>> cached( sp_.heads );
      for ( std::size_t i = 0; i < positions; ++i )
      {
        std::vector<sym> cat;
        for ( std::size_t h = 0; h < sp_.heads; ++h )
        {
          const bool invariant = !usage( ls.heads[h].scorer ).uses_x;
          if ( !invariant || cached[h].empty() )
            cached[h] = head( l, h, i, v );
          cat.insert( cat.end(), cached[h].begin(), cached[h].end() );
        }
        for ( std::size_t comp = 0; comp < ls.activation.size(); ++comp )
          next[i].push_back( role( eval( ls.activation[comp], v[i], cat ), role_value( l, comp ) ) );
      }
      v = std::move( next );
    }
    const sym score = classifier( v[0] );
    const gate_id accept = score.is_const() ? c_.constant( *score.k > flt() ) : synth::fpositive( c_, score.w );
    wires outs{ accept };
    std::vector<std::string> labels{ "accept" };
    if ( opt_.value_outputs )
      for ( std::size_t comp = 0; comp < v[0].size(); ++comp )
      {
        const auto bits = synth::flatten( pack( v[0][comp] ) );
        for ( std::size_t b = 0; b < bits.size(); ++b )
        {
          outs.push_back( bits[b] );
          labels.push_back( "v" + std::to_string( comp ) + "[" + std::to_string( b ) + "]" );
        }
      }
    c_.set_outputs( outs, labels );
    compiled out;
    out.name = sp_.name;
    out.n = n_;
    out.c = to_leaf_negation( c_ );
    out.plan = realized_;
    out.stats = measure( out.c );
    out.lookups = lookups_;
    out.cross_checks = cross_checks_;
    return out;
  }

private:
  void check_spec() const
  {
    if ( sp_.type != datatype::flt )
      throw compile_error( "rational specs cannot be compiled: only the float datatype has a constant-depth threshold-circuit "
                           "simulation (gcd reduction over rationals has no such gadget)" );
    if ( n_ == 0 )
      throw compile_error( "input length must be at least 1" );
    if ( sp_.max_length && n_ > sp_.max_length )
      throw compile_error( "input length " + std::to_string( n_ ) + " exceeds the spec's maximum " + std::to_string( sp_.max_length ) );
  }

  synth::fpack pack( const sym& s ) { return s.is_const() ? synth::fconst( c_, *s.k ) : s.w; }
  synth::fpack pack_in( circuit& c, const sym& s ) { return s.is_const() ? synth::fconst( c, *s.k ) : s.w; }

  /// Narrow a value to the plan's width for its role (never widen).
  sym role( sym s, const std::string& name )
  {
    if ( !s.is_const() && plan_ )
      if ( auto it = plan_->roles.find( name ); it != plan_->roles.end() )
        s.w = synth::fresize( c_, s.w, std::min( it->second.p_width, s.w.p.size() ), std::min( it->second.e_max, s.w.e_max ) );
    realized_.widen( name, s.is_const() ? width_of( *s.k ) : role_width{ s.w.p.size(), s.w.e_max } );
    return s;
  }

  sym eval( const expr& e, const std::vector<sym>& x, const std::vector<sym>& y )
  {
    switch ( e->kind )
    {
    case op::constant: return sym::constant( arith<flt>::lift( e->value ) );
    case op::arg_x:
      if ( e->index >= x.size() )
        throw compile_error( "expression reads (x " + std::to_string( e->index ) + ") beyond its arguments" );
      return x[e->index];
    case op::arg_y:
      if ( e->index >= y.size() )
        throw compile_error( "expression reads (y " + std::to_string( e->index ) + ") beyond its arguments" );
      return y[e->index];
    case op::select:
    {
      const sym cond = eval( e->args[0], x, y );
      if ( cond.is_const() )
        return eval( e->args[cond.k->is_zero() ? 2 : 1], x, y );
      return apply( c_, e, { cond, eval( e->args[1], x, y ), eval( e->args[2], x, y ) }, true );
    }
    default: break;
    }
    std::vector<sym> args;
    for ( const auto& a : e->args )
      args.push_back( eval( a, x, y ) );
    return apply( c_, e, args, true );
  }

  static bool structural( op k )
  {
    switch ( k )
    {
    case op::sqrt:
    case op::idiv:
    case op::divides:
    case op::call: return false;
    default: return true;
    }
  }

  /// Build one operation on evaluated operands.  `top` marks calls on the
  /// main circuit (cross-checks build scratch copies with top = false).
  sym apply( circuit& c, const expr& e, const std::vector<sym>& a, bool top )
  {
    bool all_const = true;
    for ( const auto& s : a )
      all_const = all_const && s.is_const();
    if ( all_const )
    {
      std::vector<flt> ks;
      for ( const auto& s : a )
        ks.push_back( *s.k );
      try
      {
        return sym::constant( fold_node( e, ks, sp_.host.get() ) );
      }
      catch ( const std::exception& ex )
      {
        throw compile_error( std::string( "constant subexpression (" ) + op_name( e->kind ) + " ...) fails: " + ex.what() );
      }
    }
    const bool by_table = !structural( e->kind ) || ( e->kind == op::div && !a[1].is_const() );
    if ( by_table )
      return lookup( c, e, a );
    if ( top && opt_.lookup == lookup_mode::cross_check )
      cross_check( e, a );
    return sym::wires( build( c, e, a ) );
  }

  synth::fpack build( circuit& c, const expr& e, const std::vector<sym>& a )
  {
    using namespace synth;
    const auto policy = opt_.sums;
    auto sum_of = [&]( const std::vector<sym>& terms ) {
      flt k;
      std::vector<fpack> xs;
      for ( const auto& t : terms )
        if ( t.is_const() )
          k = k + *t.k;
        else
          xs.push_back( t.w );
      if ( !k.is_zero() )
        xs.push_back( fconst( c, k ) );
      return float_sum( c, xs, policy );
    };
    auto scaled = [&]( const sym& s, const flt& coeff ) -> sym {
      if ( s.is_const() )
        return sym::constant( coeff * *s.k );
      if ( coeff == flt( 1 ) )
        return s;
      return sym::wires( fmul_const( c, s.w, coeff ) );
    };
    switch ( e->kind )
    {
    case op::add: return sum_of( a );
    case op::sub: return sum_of( { a[0], a[1].is_const() ? sym::constant( -*a[1].k ) : sym::wires( fneg( c, a[1].w ) ) } );
    case op::mul:
      if ( a[0].is_const() )
        return scaled( a[1], *a[0].k ).w;
      if ( a[1].is_const() )
        return scaled( a[0], *a[1].k ).w;
      return fmul( c, a[0].w, a[1].w, policy );
    case op::div:
      if ( a[1].k->is_zero() )
        throw compile_error( "division by the constant 0" );
      return fdiv_const( c, a[0].w, *a[1].k );
    case op::neg: return fneg( c, a[0].w );
    case op::relu: return frelu( c, a[0].w );
    case op::gt:
    case op::ge:
    case op::eq:
    {
      const auto r = fcompare( c, pack_in( c, a[0] ), pack_in( c, a[1] ) );
      const gate_id b = e->kind == op::gt ? r.gt : e->kind == op::eq ? r.eq : c.add_or( { r.gt, r.eq } );
      return from_bit( c, b );
    }
    case op::select: return fselect( c, nonzero( c, a[0].w ), pack_in( c, a[1] ), pack_in( c, a[2] ) );
    case op::lin:
    {
      std::vector<sym> terms{ sym::constant( arith<flt>::lift( e->coeffs[0] ) ) };
      for ( std::size_t i = 0; i < a.size(); ++i )
      {
        const flt coeff = arith<flt>::lift( e->coeffs[i + 1] );
        if ( !coeff.is_zero() )
          terms.push_back( scaled( a[i], coeff ) );
      }
      std::size_t vars = 0;
      for ( const auto& t : terms )
        vars += !t.is_const();
      if ( vars == 1 && terms[0].k->is_zero() && terms.size() == 2 )
        return terms[1].w;
      return sum_of( terms );
    }
    case op::num: return fnum( c, a[0].w );
    case op::den: return fden( c, a[0].w );
    default: break;
    }
    throw compile_error( std::string( "no gadget for (" ) + op_name( e->kind ) + " ...)" );
  }

  /// Truth table of a node over its non-constant operands.
  struct table
  {
    std::vector<gate_id> inputs;
    std::vector<std::optional<flt>> values; ///< per row; empty for non-canonical rows or domain errors
  };

  table tabulate( const expr& e, const std::vector<sym>& a, const std::string& why )
  {
    table t;
    for ( const auto& s : a )
      if ( !s.is_const() )
      {
        const auto bits = synth::flatten( s.w );
        t.inputs.insert( t.inputs.end(), bits.begin(), bits.end() );
      }
    if ( t.inputs.size() > opt_.lookup_cap )
      throw compile_error( why + " would need a lookup over " + std::to_string( t.inputs.size() ) + " operand bits, above the cap of " +
                           std::to_string( opt_.lookup_cap ) );
    const std::uint64_t rows = std::uint64_t( 1 ) << t.inputs.size();
    t.values.resize( rows );
    std::vector<flt> vals( a.size() );
    for ( std::uint64_t r = 0; r < rows; ++r )
    {
      std::size_t pos = 0;
      bool ok = true;
      for ( std::size_t i = 0; i < a.size() && ok; ++i )
      {
        if ( a[i].is_const() )
        {
          vals[i] = *a[i].k;
          continue;
        }
        auto d = decode_row( r, pos, a[i].w );
        ok = d.has_value();
        if ( ok )
          vals[i] = *d;
      }
      if ( !ok )
        continue;
      try
      {
        t.values[r] = fold_node( e, vals, sp_.host.get() );
      }
      catch ( const std::exception& )
      {
        // the machine fails on this operand; any output will do
      }
    }
    return t;
  }

  sym lookup( circuit& c, const expr& e, const std::vector<sym>& a )
  {
    const std::string what = std::string( "(" ) + op_name( e->kind ) + ( e->kind == op::call ? " " + e->name : "" ) + " ...)";
    if ( e->kind == op::call )
    {
      const auto* f = sp_.host ? sp_.host->find( e->name ) : nullptr;
      if ( !f )
        throw compile_error( "unknown host function '" + e->name + "'" );
      if ( !f->size_preserving )
        throw compile_error( "host function '" + e->name + "' is not size-preserving; refusing to compile it" );
    }
    if ( opt_.lookup == lookup_mode::off )
      throw compile_error( what + " has no structural gadget and lookups are disabled" );
    const auto t = tabulate( e, a, what );
    role_width w;
    for ( const auto& v : t.values )
      if ( v )
      {
        w.p_width = std::max( w.p_width, v->num().bit_length() );
        w.e_max = std::max( w.e_max, v->exp() );
      }
    const std::size_t ew = synth::bit_width( w.e_max ), d = 1 + w.p_width + ew;
    std::vector<std::vector<bool>> rows( t.values.size(), std::vector<bool>( d, false ) );
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
      if ( !t.values[r] )
        continue;
      const flt& v = *t.values[r];
      rows[r][0] = v.negative();
      for ( std::size_t i = 0; i < w.p_width; ++i )
        rows[r][1 + i] = v.num().bit( i );
      for ( std::size_t i = 0; i < ew; ++i )
        rows[r][1 + w.p_width + i] = ( v.exp() >> i ) & 1u;
    }
    const auto out = synth::lookup_into( c, t.inputs, rows, d );
    ++lookups_;
    synth::fpack p;
    p.sign = out[0];
    p.p.assign( out.begin() + 1, out.begin() + 1 + static_cast<std::ptrdiff_t>( w.p_width ) );
    p.e.assign( out.begin() + 1 + static_cast<std::ptrdiff_t>( w.p_width ), out.end() );
    p.e_max = w.e_max;
    return sym::wires( p );
  }

  /// Rebuild the node on fresh inputs in a scratch circuit and compare it
  /// with the truth table on every canonical operand assignment.
  void cross_check( const expr& e, const std::vector<sym>& a )
  {
    std::size_t bits = 0;
    for ( const auto& s : a )
      if ( !s.is_const() )
        bits += s.w.width();
    if ( bits > opt_.lookup_cap )
      return;
    const auto t = tabulate( e, a, "cross-check" );
    circuit scratch( bits );
    scratch.set_folding( opt_.folding );
    std::vector<sym> fresh;
    std::size_t next = 0;
    for ( const auto& s : a )
    {
      if ( s.is_const() )
      {
        fresh.push_back( s );
        continue;
      }
      synth::fpack p;
      p.sign = scratch.input( next++ );
      for ( std::size_t i = 0; i < s.w.p.size(); ++i )
        p.p.push_back( scratch.input( next++ ) );
      for ( std::size_t i = 0; i < s.w.e.size(); ++i )
        p.e.push_back( scratch.input( next++ ) );
      p.e_max = s.w.e_max;
      fresh.push_back( sym::wires( p ) );
    }
    const auto r = build( scratch, e, fresh );
    scratch.set_outputs( synth::flatten( r ) );
    std::vector<std::vector<bool>> in;
    std::vector<std::uint64_t> which;
    for ( std::uint64_t row = 0; row < t.values.size(); ++row )
      if ( t.values[row] )
      {
        std::vector<bool> x( bits );
        for ( std::size_t i = 0; i < bits; ++i )
          x[i] = ( row >> i ) & 1u;
        in.push_back( std::move( x ) );
        which.push_back( row );
      }
    const auto out = eval_batch( scratch, in );
    for ( std::size_t k = 0; k < out.size(); ++k )
    {
      std::uint64_t packed = 0;
      for ( std::size_t i = 0; i < out[k].size() && i < 64; ++i )
        packed |= std::uint64_t( out[k][i] ) << i;
      std::size_t pos = 0;
      const auto got = decode_row( packed, pos, r );
      if ( out[k].size() > 64 || !got || *got != *t.values[which[k]] )
        throw compile_error( std::string( "cross-check failed for (" ) + op_name( e->kind ) + " ...) on operand row " +
                             std::to_string( which[k] ) );
    }
    ++cross_checks_;
  }

  std::vector<sym> head( std::size_t l, std::size_t h, std::size_t i, const std::vector<std::vector<sym>>& v )
  {
    using namespace synth;
    const auto& hs = sp_.layers[l - 1].heads[h];
    const std::size_t B = sp_.block();
    auto comp = [&]( std::size_t j, std::size_t k ) -> const sym& { return v[j][h * B + k]; };
    std::vector<sym> out( B );

    std::vector<sym> scores;
    bool fixed = hs.kind == attention_kind::uniform;
    if ( !fixed )
    {
      fixed = true;
      for ( std::size_t j = 0; j < n_; ++j )
      {
        scores.push_back( role( eval( hs.scorer, v[i], v[j] ), role_score( l, h ) ) );
        fixed = fixed && scores.back().is_const();
      }
    }
    if ( fixed )
    {
      std::vector<std::size_t> support;
      if ( hs.kind == attention_kind::uniform )
        for ( std::size_t j = 0; j < n_; ++j )
          support.push_back( j );
      else
      {
        std::vector<flt> a;
        for ( const auto& s : scores )
          a.push_back( *s.k );
        support = max_set<flt>( a );
        if ( hs.kind == attention_kind::hard )
          support.resize( 1 );
      }
      for ( std::size_t k = 0; k < B; ++k )
      {
        if ( hs.kind == attention_kind::hard )
        {
          out[k] = comp( support[0], k );
        }
        else
        {
          std::vector<sym> terms;
          for ( auto j : support )
            terms.push_back( comp( j, k ) );
          out[k] = average( terms );
        }
        out[k] = role( out[k], role_head( l, h, k ) );
      }
      return out;
    }

    // data-dependent maxima: pairwise comparisons of the scores
    std::vector<fpack> a;
    for ( const auto& s : scores )
      a.push_back( pack( s ) );
    std::vector<std::vector<gate_id>> ge( n_, std::vector<gate_id>( n_, no_wire ) );
    for ( std::size_t j = 0; j < n_; ++j )
      for ( std::size_t k = j + 1; k < n_; ++k )
      {
        const auto r = fcompare( c_, a[j], a[k] );
        ge[j][k] = c_.add_or( { r.gt, r.eq } );
        ge[k][j] = c_.add_not( r.gt );
      }
    wires first, maximal;
    for ( std::size_t j = 0; j < n_; ++j )
    {
      wires f, m;
      for ( std::size_t k = 0; k < n_; ++k )
      {
        if ( k == j )
          continue;
        m.push_back( ge[j][k] );
        f.push_back( k < j ? c_.add_not( ge[k][j] ) : ge[j][k] );
      }
      first.push_back( c_.add_and( f ) );
      maximal.push_back( c_.add_and( m ) );
    }
    const wires count = hs.kind == attention_kind::saturated ? exact_count( c_, maximal ) : wires{};
    for ( std::size_t k = 0; k < B; ++k )
    {
      std::vector<fpack> xs;
      for ( std::size_t j = 0; j < n_; ++j )
        xs.push_back( pack( comp( j, k ) ) );
      if ( hs.kind == attention_kind::hard )
      {
        out[k] = sym::wires( fselect_one( c_, first, xs ) );
      }
      else
      {
        std::vector<fpack> masked;
        for ( std::size_t j = 0; j < n_; ++j )
          masked.push_back( fmask( c_, maximal[j], xs[j] ) );
        out[k] = sym::wires( divide_by_count( c_, float_sum( c_, masked, opt_.sums ), count ) );
      }
      out[k] = role( out[k], role_head( l, h, k ) );
    }
    return out;
  }

  /// Sum of the terms times flt_div(1, count), the machine's attention weight.
  sym average( const std::vector<sym>& terms )
  {
    const flt m( static_cast<std::uint64_t>( terms.size() ) );
    bool all_const = true;
    for ( const auto& t : terms )
      all_const = all_const && t.is_const();
    if ( all_const )
    {
      const flt u = flt_div( flt( 1 ), m );
      flt s;
      for ( const auto& t : terms )
        s = s + u * *t.k;
      return sym::constant( s );
    }
    flt k;
    std::vector<synth::fpack> xs;
    for ( const auto& t : terms )
      if ( t.is_const() )
        k = k + *t.k;
      else
        xs.push_back( t.w );
    if ( !k.is_zero() )
      xs.push_back( synth::fconst( c_, k ) );
    return sym::wires( synth::fdiv_const( c_, synth::float_sum( c_, xs, opt_.sums ), m ) );
  }

  sym classifier( const std::vector<sym>& v )
  {
    std::vector<sym> terms{ sym::constant( arith<flt>::lift( sp_.classifier_b ) ) };
    for ( std::size_t k = 0; k < v.size(); ++k )
    {
      const flt w = arith<flt>::lift( sp_.classifier_w[k] );
      if ( w.is_zero() )
        continue;
      if ( v[k].is_const() )
        terms.push_back( sym::constant( w * *v[k].k ) );
      else
        terms.push_back( w == flt( 1 ) ? v[k] : sym::wires( synth::fmul_const( c_, v[k].w, w ) ) );
    }
    flt k;
    std::vector<synth::fpack> xs;
    for ( const auto& t : terms )
      if ( t.is_const() )
        k = k + *t.k;
      else
        xs.push_back( t.w );
    if ( xs.empty() )
      return sym::constant( k );
    if ( !k.is_zero() )
      xs.push_back( synth::fconst( c_, k ) );
    return sym::wires( synth::float_sum( c_, xs, opt_.sums ) );
  }

  const transformer_spec& sp_;
  std::size_t n_;
  const width_plan* plan_;
  compile_options opt_;
  circuit c_;
  width_plan realized_;
  std::size_t lookups_ = 0;
  std::size_t cross_checks_ = 0;
};

} // namespace detail

/// Compile a float spec at input length n.  Without a plan the gadget widths
/// are used throughout, which is exact for every input.
inline compiled compile_transformer( const transformer_spec& sp, std::size_t n, const width_plan* plan = nullptr,
                                     const compile_options& opt = {} )
{
  return detail::compiler( sp, n, plan, opt ).run();
}

/// Saturated and uniform heads only.
inline compiled compile_saturated( const transformer_spec& sp, std::size_t n, const width_plan* plan = nullptr,
                                   const compile_options& opt = {} )
{
  for ( const auto& l : sp.layers )
    for ( const auto& h : l.heads )
      if ( h.kind == attention_kind::hard )
        throw compile_error( "compile_saturated needs saturated or uniform heads; use compile_hard for hard attention" );
  return compile_transformer( sp, n, plan, opt );
}

/// Hard heads only.  Sums use adder trees, so the circuit has no threshold
/// gates; this is checked.
inline compiled compile_hard( const transformer_spec& sp, std::size_t n, const width_plan* plan = nullptr, compile_options opt = {} )
{
  for ( const auto& l : sp.layers )
    for ( const auto& h : l.heads )
      if ( h.kind != attention_kind::hard )
        throw compile_error( "compile_hard needs every head to use hard attention" );
  opt.sums = synth::sum_policy::tree;
  auto r = compile_transformer( sp, n, plan, opt );
  if ( r.stats.thresholds != 0 )
    throw compile_error( "hard-attention circuit unexpectedly contains " + std::to_string( r.stats.thresholds ) + " threshold gates" );
  return r;
}

inline bool all_hard( const transformer_spec& sp )
{
  for ( const auto& l : sp.layers )
    for ( const auto& h : l.heads )
      if ( h.kind != attention_kind::hard )
        return false;
  return true;
}

/// Width plan by either derivation.  Analytic: the widths a plan-free
/// compilation realizes.  Empirical: sampled trace maxima plus `margin`.
inline width_plan plan_widths( const transformer_spec& sp, std::size_t n, plan_mode mode,
                               const std::vector<std::vector<std::size_t>>& samples = {}, std::size_t margin = 2,
                               const compile_options& opt = {} )
{
  if ( mode == plan_mode::empirical )
    return plan_from_samples( sp, n, samples, margin );
  auto o = opt;
  if ( all_hard( sp ) )
    o.sums = synth::sum_policy::tree;
  return compile_transformer( sp, n, nullptr, o ).plan;
}

} // namespace satc
