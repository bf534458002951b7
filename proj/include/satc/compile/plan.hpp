#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../machine/run.hpp"
#include "../machine/spec.hpp"

namespace satc
{

// Wire roles.  Every value crossing a layer boundary has a role:
//   v<l>.<k>         component k of the layer-l value vectors (l = 0: embedding)
//   score<l>.<h>     attention scores of head h in layer l
//   head<l>.<h>.<c>  component c of head h's output in layer l
// A plan fixes, per role, the numerator width and an exponent bound.

inline std::string role_value( std::size_t l, std::size_t k ) { return "v" + std::to_string( l ) + "." + std::to_string( k ); }
inline std::string role_score( std::size_t l, std::size_t h ) { return "score" + std::to_string( l ) + "." + std::to_string( h ); }
inline std::string role_head( std::size_t l, std::size_t h, std::size_t c )
{
  return "head" + std::to_string( l ) + "." + std::to_string( h ) + "." + std::to_string( c );
}

struct role_width
{
  std::size_t p_width = 0;
  std::uint64_t e_max = 0;

  friend bool operator==( const role_width&, const role_width& ) = default;
  bool covers( const role_width& o ) const { return p_width >= o.p_width && e_max >= o.e_max; }
};

inline role_width width_of( const flt& v ) { return { v.num().bit_length(), v.exp() }; }

enum class plan_mode
{
  analytic,  ///< widths the gadgets produce, valid for every input
  empirical  ///< measured maxima over sample inputs plus a margin
};

inline const char* to_string( plan_mode m ) { return m == plan_mode::analytic ? "analytic" : "empirical"; }

struct width_plan
{
  plan_mode mode = plan_mode::analytic;
  std::size_t n = 0;
  std::map<std::string, role_width> roles;

  void widen( const std::string& role, const role_width& w )
  {
    auto& r = roles[role];
    r.p_width = std::max( r.p_width, w.p_width );
    r.e_max = std::max( r.e_max, w.e_max );
  }

  nlohmann::json to_json() const
  {
    nlohmann::json j{ { "mode", to_string( mode ) }, { "n", n } };
    auto& r = j["roles"] = nlohmann::json::object();
    for ( const auto& [name, w] : roles )
      r[name] = { { "p_width", w.p_width }, { "e_max", w.e_max } };
    return j;
  }
};

/// Role widths observed on one float trace.
inline width_plan measure_trace( const transformer_spec& sp, const value_trace<flt>& tr )
{
  width_plan p;
  p.mode = plan_mode::empirical;
  p.n = tr.n();
  const std::size_t layers = sp.layers.size();
  for ( std::size_t l = 0; l <= layers; ++l )
  {
    // the last layer is only observed at position 1, which is all the classifier reads
    const auto& vals = tr.layers[l].values;
    const std::size_t upto = l == layers && l > 0 ? 1 : vals.size();
    for ( std::size_t i = 0; i < upto; ++i )
      for ( std::size_t k = 0; k < vals[i].size(); ++k )
        p.widen( role_value( l, k ), width_of( vals[i][k] ) );
    if ( l == 0 )
      continue;
    for ( std::size_t h = 0; h < tr.layers[l].heads.size(); ++h )
    {
      const auto& ht = tr.layers[l].heads[h];
      const std::size_t rows = l == layers ? 1 : ht.outputs.size();
      for ( std::size_t i = 0; i < rows && i < ht.outputs.size(); ++i )
      {
        for ( std::size_t c = 0; c < ht.outputs[i].size(); ++c )
          p.widen( role_head( l, h, c ), width_of( ht.outputs[i][c] ) );
        if ( i < ht.scores.size() )
          for ( const auto& a : ht.scores[i] )
            p.widen( role_score( l, h ), width_of( a ) );
      }
    }
  }
  return p;
}

/// Empirical plan: role maxima over the samples, widened by `margin` bits
/// of numerator and `margin` units of exponent.
inline width_plan plan_from_samples( const transformer_spec& sp, std::size_t n, const std::vector<std::vector<std::size_t>>& samples,
                                     std::size_t margin = 2 )
{
  if ( samples.empty() )
    throw domain_error( "an empirical width plan needs at least one sample input" );
  if ( sp.type != datatype::flt )
    throw compile_error( "only float specs have width plans" );
  width_plan p;
  p.mode = plan_mode::empirical;
  p.n = n;
  for ( const auto& w : samples )
  {
    if ( w.size() != n )
      throw domain_error( "sample length differs from n" );
    const auto t = measure_trace( sp, run_typed<flt>( sp, w ) );
    for ( const auto& [role, rw] : t.roles )
      p.widen( role, rw );
  }
  for ( auto& [role, rw] : p.roles )
  {
    rw.p_width += margin;
    rw.e_max += margin;
  }
  return p;
}

/// Roles of `measured` that `plan` does not cover, e.g. "head1.0.0 needs p 5 e 3, plan p 4 e 3".
inline std::vector<std::string> uncovered_roles( const width_plan& plan, const width_plan& measured )
{
  std::vector<std::string> out;
  for ( const auto& [role, w] : measured.roles )
  {
    auto it = plan.roles.find( role );
    if ( it == plan.roles.end() || !it->second.covers( w ) )
      out.push_back( role + " needs p " + std::to_string( w.p_width ) + " e " + std::to_string( w.e_max ) +
                     ( it == plan.roles.end() ? std::string( ", plan has none" )
                                              : ", plan p " + std::to_string( it->second.p_width ) + " e " + std::to_string( it->second.e_max ) ) );
  }
  return out;
}

} // namespace satc
