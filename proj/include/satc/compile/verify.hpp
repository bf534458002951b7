#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../circuit/eval.hpp"
#include "../machine/instrument.hpp"
#include "../machine/run.hpp"
#include "compiler.hpp"

namespace satc
{

enum class verify_mode
{
  exhaustive,
  random
};

struct verify_options
{
  verify_mode mode = verify_mode::exhaustive;
  std::size_t samples = 1000; ///< random mode
  std::uint64_t seed = 1;
  std::size_t batch = 4096;
};

/// Largest input set enumerated exhaustively.
inline constexpr std::uint64_t exhaustive_limit = std::uint64_t( 1 ) << 20;

struct verify_row
{
  std::size_t n = 0;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::size_t machine_errors = 0; ///< inputs on which the machine itself fails
  std::optional<std::vector<std::size_t>> counterexample;
  bool machine_accept = false;
  bool circuit_accept = false;
  std::vector<std::string> overflow; ///< plan violations on the counterexample

  bool passed() const { return mismatches == 0; }
};

inline nlohmann::json to_json( const transformer_spec& sp, const verify_row& r )
{
  nlohmann::json j{ { "n", r.n }, { "checked", r.checked }, { "mismatches", r.mismatches }, { "machine_errors", r.machine_errors } };
  if ( r.counterexample )
  {
    j["counterexample"] = sp.detokenize( *r.counterexample );
    j["machine_accept"] = r.machine_accept;
    j["circuit_accept"] = r.circuit_accept;
    j["overflow"] = r.overflow;
  }
  return j;
}

/// enumerate_words, limited to 2^20 inputs.
inline std::vector<std::vector<std::size_t>> all_words( std::size_t k, std::size_t n )
{
  const double count = std::pow( static_cast<double>( k ), static_cast<double>( n ) );
  if ( count > static_cast<double>( exhaustive_limit ) )
    throw domain_error( "exhaustive verification is limited to 2^20 inputs, |alphabet|^n is " + std::to_string( count ) );
  return enumerate_words( k, n );
}

/// Plan violations of the machine trace on one input, naming layer,
/// position and component.
inline std::vector<std::string> overflow_sites( const transformer_spec& sp, const width_plan& plan, const std::vector<std::size_t>& tokens )
{
  std::vector<std::string> out;
  if ( sp.type != datatype::flt )
    return out;
  const auto tr = run_typed<flt>( sp, tokens );
  auto check = [&]( const std::string& role, const flt& v, const std::string& where ) {
    auto it = plan.roles.find( role );
    const auto w = width_of( v );
    if ( it != plan.roles.end() && !it->second.covers( w ) )
      out.push_back( where + ": " + role + " = " + v.to_string() + " needs p " + std::to_string( w.p_width ) + " e " +
                     std::to_string( w.e_max ) + ", plan p " + std::to_string( it->second.p_width ) + " e " +
                     std::to_string( it->second.e_max ) );
  };
  const std::size_t L = sp.layers.size();
  for ( std::size_t l = 0; l <= L; ++l )
  {
    const auto& vals = tr.layers[l].values;
    const std::size_t upto = l == L && l > 0 ? 1 : vals.size();
    for ( std::size_t i = 0; i < upto; ++i )
    {
      const std::string at = "layer " + std::to_string( l ) + " position " + std::to_string( i + 1 );
      for ( std::size_t k = 0; k < vals[i].size(); ++k )
        check( role_value( l, k ), vals[i][k], at );
      if ( l == 0 )
        continue;
      for ( std::size_t h = 0; h < tr.layers[l].heads.size(); ++h )
      {
        const auto& ht = tr.layers[l].heads[h];
        for ( std::size_t c = 0; c < ht.outputs[i].size(); ++c )
          check( role_head( l, h, c ), ht.outputs[i][c], at );
        if ( i < ht.scores.size() )
          for ( const auto& a : ht.scores[i] )
            check( role_score( l, h ), a, at );
      }
    }
  }
  return out;
}

/// Compare output 0 of a compiled circuit with recognize on a set of words.
inline verify_row check_circuit( const transformer_spec& sp, std::size_t n, const circuit& c,
                                 const std::vector<std::vector<std::size_t>>& words, const width_plan* plan = nullptr,
                                 std::size_t batch = 4096 )
{
  if ( c.num_inputs() != n * sp.alphabet.size() || c.outputs().empty() )
    throw domain_error( "circuit interface does not match the spec at n = " + std::to_string( n ) );
  verify_row r;
  r.n = n;
  for ( std::size_t lo = 0; lo < words.size(); lo += batch )
  {
    const std::size_t hi = std::min( words.size(), lo + batch );
    std::vector<std::vector<bool>> xs;
    for ( std::size_t i = lo; i < hi; ++i )
      xs.push_back( encode_input( sp, words[i] ) );
    const auto out = eval_batch( c, xs );
    for ( std::size_t i = lo; i < hi; ++i )
    {
      bool expected = false;
      try
      {
        expected = recognize( sp, words[i] );
      }
      catch ( const std::exception& )
      {
        ++r.machine_errors;
        continue;
      }
      ++r.checked;
      const bool got = out[i - lo][0];
      if ( got == expected )
        continue;
      if ( r.mismatches++ == 0 )
      {
        r.counterexample = words[i];
        r.machine_accept = expected;
        r.circuit_accept = got;
        if ( plan )
          r.overflow = overflow_sites( sp, *plan, words[i] );
      }
    }
  }
  return r;
}

inline std::vector<std::vector<std::size_t>> verification_words( const transformer_spec& sp, std::size_t n, const verify_options& opt )
{
  if ( opt.mode == verify_mode::exhaustive )
    return all_words( sp.alphabet.size(), n );
  return random_words( sp.alphabet.size(), n, opt.samples, opt.seed + n );
}

/// Compile at each n (concurrently) and compare with the machine.
inline std::vector<verify_row> verify_equivalence( const transformer_spec& sp, const std::vector<std::size_t>& ns,
                                                   const verify_options& opt = {}, const width_plan* plan = nullptr,
                                                   const compile_options& copt = {} )
{
  std::vector<std::future<verify_row>> jobs;
  for ( auto n : ns )
    jobs.push_back( std::async( std::launch::async, [&sp, n, &opt, plan, &copt] {
      const bool hard = all_hard( sp );
      const auto cc = hard ? compile_hard( sp, n, plan, copt ) : compile_transformer( sp, n, plan, copt );
      return check_circuit( sp, n, cc.c, verification_words( sp, n, opt ), plan, opt.batch );
    } ) );
  std::vector<verify_row> rows;
  for ( auto& j : jobs )
    rows.push_back( j.get() );
  return rows;
}

/// A plan with every non-constant role narrowed by `bits` numerator bits
/// (at least 1 remains), for negative controls.
inline width_plan corrupt_plan( width_plan p, std::size_t bits = 1 )
{
  for ( auto& [role, w] : p.roles )
    w.p_width = w.p_width > bits ? w.p_width - bits : std::min<std::size_t>( w.p_width, 1 );
  return p;
}

} // namespace satc
