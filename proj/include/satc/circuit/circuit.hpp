#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "../error.hpp"

namespace satc
{

enum class gate_kind : std::uint8_t
{
  input,     ///< k = input index
  neg_input, ///< k = input index
  constant,  ///< k = 0 or 1
  and_,
  or_,
  not_,
  th_ge, ///< 1 iff at least k inputs are 1
  th_le  ///< 1 iff at most k inputs are 1
};

inline const char* to_string( gate_kind k )
{
  switch ( k )
  {
  case gate_kind::input: return "INPUT";
  case gate_kind::neg_input: return "NEG_INPUT";
  case gate_kind::constant: return "CONST";
  case gate_kind::and_: return "AND";
  case gate_kind::or_: return "OR";
  case gate_kind::not_: return "NOT";
  case gate_kind::th_ge: return "THRESHOLD_GE";
  case gate_kind::th_le: return "THRESHOLD_LE";
  }
  return "?";
}

inline bool is_leaf( gate_kind k ) { return k == gate_kind::input || k == gate_kind::neg_input || k == gate_kind::constant; }
inline bool is_threshold( gate_kind k ) { return k == gate_kind::th_ge || k == gate_kind::th_le; }

/// Builder simplification.  `full` folds constants and collapses single-input
/// AND/OR; `keep_depth` only replaces gates decided by constants (a gate
/// with one remaining input is kept); `none` adds every gate verbatim.
enum class fold_mode
{
  full,
  keep_depth,
  none
};

using gate_id = std::uint32_t;
using wires = std::vector<gate_id>;

struct gate
{
  gate_kind kind;
  std::uint64_t k = 0;
  std::uint32_t first = 0; ///< offset into the fan-in table
  std::uint32_t count = 0;
};

/// Gate table in topological order: every gate's inputs have smaller ids.
/// The add_* builders fold constants and trivial fan-ins, so the returned
/// id may be an existing gate.
class circuit
{
public:
  explicit circuit( std::size_t n = 0 ) : n_( n )
  {
    for ( std::size_t i = 0; i < n; ++i )
      push( gate_kind::input, i, {} );
  }

  fold_mode folding() const noexcept { return fold_; }
  void set_folding( fold_mode m ) noexcept { fold_ = m; }

  std::size_t num_inputs() const noexcept { return n_; }
  std::size_t num_gates() const noexcept { return gates_.size(); }
  const gate& at( gate_id g ) const { return gates_.at( g ); }
  gate_kind kind( gate_id g ) const { return gates_[g].kind; }
  std::span<const gate_id> inputs( gate_id g ) const
  {
    return { fanin_.data() + gates_[g].first, gates_[g].count };
  }

  const wires& outputs() const noexcept { return outputs_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_outputs( wires o, std::vector<std::string> labels = {} )
  {
    if ( !labels.empty() && labels.size() != o.size() )
      throw domain_error( "output labels must match the outputs" );
    for ( auto g : o )
      check( g );
    outputs_ = std::move( o );
    labels_ = std::move( labels );
  }
  void add_output( gate_id g, std::string label = {} )
  {
    check( g );
    if ( !label.empty() && labels_.size() < outputs_.size() )
      labels_.resize( outputs_.size() );
    outputs_.push_back( g );
    if ( !labels_.empty() || !label.empty() )
      labels_.push_back( std::move( label ) );
  }

  // ---- leaves ---------------------------------------------------------------

  gate_id input( std::size_t i ) const
  {
    if ( i >= n_ )
      throw domain_error( "input index " + std::to_string( i ) + " out of range" );
    return static_cast<gate_id>( i );
  }

  gate_id neg_input( std::size_t i )
  {
    input( i );
    if ( neg_cache_.size() < n_ )
      neg_cache_.assign( n_, none );
    if ( neg_cache_[i] == none )
      neg_cache_[i] = push( gate_kind::neg_input, i, {} );
    return neg_cache_[i];
  }

  gate_id constant( bool v )
  {
    gate_id& c = v ? one_ : zero_;
    if ( c == none )
      c = push( gate_kind::constant, v, {} );
    return c;
  }

  /// True and the value when g is a constant gate.
  bool is_const( gate_id g, bool* v = nullptr ) const
  {
    if ( gates_[g].kind != gate_kind::constant )
      return false;
    if ( v )
      *v = gates_[g].k != 0;
    return true;
  }

  // ---- logic ----------------------------------------------------------------

  gate_id add_and( std::span<const gate_id> xs ) { return add_junction( true, xs ); }
  gate_id add_or( std::span<const gate_id> xs ) { return add_junction( false, xs ); }
  gate_id add_and( std::initializer_list<gate_id> xs ) { return add_junction( true, std::span<const gate_id>( xs.begin(), xs.size() ) ); }
  gate_id add_or( std::initializer_list<gate_id> xs ) { return add_junction( false, std::span<const gate_id>( xs.begin(), xs.size() ) ); }

  gate_id add_not( gate_id a )
  {
    check( a );
    if ( fold_ == fold_mode::none )
      return push( gate_kind::not_, 0, { &a, 1 } );
    bool v;
    if ( is_const( a, &v ) )
      return constant( !v );
    if ( gates_[a].kind == gate_kind::not_ )
      return fanin_[gates_[a].first];
    if ( gates_[a].kind == gate_kind::input )
      return neg_input( gates_[a].k );
    if ( gates_[a].kind == gate_kind::neg_input )
      return input( gates_[a].k );
    return push( gate_kind::not_, 0, { &a, 1 } );
  }

  gate_id add_threshold_ge( std::uint64_t k, std::span<const gate_id> xs ) { return add_threshold( true, k, xs ); }
  gate_id add_threshold_le( std::uint64_t k, std::span<const gate_id> xs ) { return add_threshold( false, k, xs ); }

  /// Append a gate verbatim (no folding).  Inputs must already exist.
  gate_id add_raw( gate_kind kind, std::uint64_t k, std::span<const gate_id> xs )
  {
    for ( auto x : xs )
      check( x );
    if ( is_leaf( kind ) && !xs.empty() )
      throw domain_error( std::string( to_string( kind ) ) + " gates take no inputs" );
    if ( kind == gate_kind::not_ && xs.size() != 1 )
      throw domain_error( "NOT takes exactly one input" );
    if ( ( kind == gate_kind::input || kind == gate_kind::neg_input ) && k >= n_ )
      throw domain_error( "input index out of range" );
    if ( kind == gate_kind::constant && k > 1 )
      throw domain_error( "CONST must be 0 or 1" );
    return push( kind, k, xs );
  }

  gate_id add_raw( gate_kind kind, std::uint64_t k, std::initializer_list<gate_id> xs )
  {
    return add_raw( kind, k, std::span<const gate_id>( xs.begin(), xs.size() ) );
  }

  friend bool operator==( const circuit& a, const circuit& b )
  {
    if ( a.n_ != b.n_ || a.gates_.size() != b.gates_.size() || a.outputs_ != b.outputs_ || a.labels_ != b.labels_ )
      return false;
    for ( gate_id g = 0; g < a.gates_.size(); ++g )
    {
      if ( a.gates_[g].kind != b.gates_[g].kind || a.gates_[g].k != b.gates_[g].k )
        return false;
      const auto ia = a.inputs( g ), ib = b.inputs( g );
      if ( !std::equal( ia.begin(), ia.end(), ib.begin(), ib.end() ) )
        return false;
    }
    return true;
  }

private:
  static constexpr gate_id none = ~gate_id( 0 );

  void check( gate_id g ) const
  {
    if ( g >= gates_.size() )
      throw domain_error( "reference to unknown gate " + std::to_string( g ) );
  }

  gate_id push( gate_kind kind, std::uint64_t k, std::span<const gate_id> xs )
  {
    gate gt{ kind, k, static_cast<std::uint32_t>( fanin_.size() ), static_cast<std::uint32_t>( xs.size() ) };
    fanin_.insert( fanin_.end(), xs.begin(), xs.end() );
    gates_.push_back( gt );
    return static_cast<gate_id>( gates_.size() - 1 );
  }

  gate_id add_junction( bool is_and, std::span<const gate_id> xs )
  {
    if ( fold_ == fold_mode::none )
    {
      for ( auto x : xs )
        check( x );
      return push( is_and ? gate_kind::and_ : gate_kind::or_, 0, xs );
    }
    scratch_.clear();
    for ( auto x : xs )
    {
      check( x );
      bool v;
      if ( is_const( x, &v ) )
      {
        if ( v != is_and )
          return constant( !is_and );
        continue;
      }
      scratch_.push_back( x );
    }
    std::sort( scratch_.begin(), scratch_.end() );
    scratch_.erase( std::unique( scratch_.begin(), scratch_.end() ), scratch_.end() );
    if ( scratch_.empty() )
      return constant( is_and );
    if ( scratch_.size() == 1 && fold_ == fold_mode::full )
      return scratch_[0];
    return push( is_and ? gate_kind::and_ : gate_kind::or_, 0, scratch_ );
  }

  gate_id add_threshold( bool ge, std::uint64_t k, std::span<const gate_id> xs )
  {
    if ( fold_ == fold_mode::none )
    {
      for ( auto x : xs )
        check( x );
      return push( ge ? gate_kind::th_ge : gate_kind::th_le, k, xs );
    }
    scratch_.clear();
    std::uint64_t ones = 0;
    for ( auto x : xs )
    {
      check( x );
      bool v;
      if ( is_const( x, &v ) )
        ones += v;
      else
        scratch_.push_back( x );
    }
    const std::uint64_t f = scratch_.size();
    if ( fold_ == fold_mode::keep_depth )
    {
      if ( ge ? k <= ones : k >= ones + f )
        return constant( true );
      if ( ge ? k > ones + f : k < ones )
        return constant( false );
      return push( ge ? gate_kind::th_ge : gate_kind::th_le, k - ones, scratch_ );
    }
    if ( ge )
    {
      if ( k <= ones )
        return constant( true );
      k -= ones;
      if ( k > f )
        return constant( false );
      if ( f == 1 )
        return scratch_[0];
      if ( k == 1 )
        return add_junction( false, std::vector<gate_id>( scratch_ ) );
      if ( k == f )
        return add_junction( true, std::vector<gate_id>( scratch_ ) );
      return push( gate_kind::th_ge, k, scratch_ );
    }
    if ( k < ones )
      return constant( false );
    k -= ones;
    if ( k >= f )
      return constant( true );
    return push( gate_kind::th_le, k, scratch_ );
  }

  std::size_t n_;
  std::vector<gate> gates_;
  wires fanin_;
  wires outputs_;
  std::vector<std::string> labels_;
  wires neg_cache_;
  gate_id zero_ = none;
  gate_id one_ = none;
  wires scratch_;
  fold_mode fold_ = fold_mode::full;
};

/// Temporarily switch a circuit's folding mode.
class fold_guard
{
public:
  fold_guard( circuit& c, fold_mode m ) : c_( c ), saved_( c.folding() ) { c.set_folding( m ); }
  ~fold_guard() { c_.set_folding( saved_ ); }
  fold_guard( const fold_guard& ) = delete;
  fold_guard& operator=( const fold_guard& ) = delete;

private:
  circuit& c_;
  fold_mode saved_;
};

} // namespace satc
