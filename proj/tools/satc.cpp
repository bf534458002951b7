// satc: run, compile, verify and measure saturated-attention transformers.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <satc/builtins.hpp>
#include <satc/circuit.hpp>
#include <satc/compile.hpp>
#include <satc/machine.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace satc;

namespace
{

enum exit_code
{
  exit_pass = 0,
  exit_mismatch = 1,
  exit_usage = 2
};

struct spec_source
{
  std::string file;
  std::string builtin;
  std::string predicate = "parity";
  std::string type = "float";
  std::size_t n_max = 10;

  void attach( CLI::App& app )
  {
    auto* f = app.add_option( "--spec", file, "spec file (s-expression)" )->check( CLI::ExistingFile );
    auto* b = app.add_option( "--builtin", builtin, "builtin spec: maj, maj-ln, prime-universal, resource-bounded, hard-demo" );
    f->excludes( b );
    app.add_option( "--pred", predicate, "predicate for the universal builtins: parity, bigram11, majority" );
    app.add_option( "--type", type, "datatype for maj and resource-bounded: float or rational" );
    app.add_option( "--n-max", n_max, "longest input of the universal builtins" );
  }

  transformer_spec load() const
  {
    if ( !file.empty() )
    {
      std::ifstream in( file );
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_spec( ss.str(), std::make_shared<const host_registry>( standard_host() ) );
    }
    if ( builtin.empty() )
      throw CLI::ValidationError( "one of --spec or --builtin is required" );
    builtin_options o;
    o.type = parse_datatype( type );
    o.predicate = predicate;
    o.n_max = n_max;
    return make_builtin( builtin, o );
  }
};

/// Comma-separated values and inclusive ranges a..b.
std::vector<std::size_t> parse_n_list( const std::string& text )
{
  std::vector<std::size_t> out;
  std::stringstream ss( text );
  std::string item;
  auto number = [&]( const std::string& s ) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try
    {
      v = std::stoull( s, &pos );
    }
    catch ( const std::exception& )
    {
      pos = 0;
    }
    if ( pos != s.size() || s.empty() || v == 0 )
      throw CLI::ValidationError( "--n-list: '" + s + "' is not a positive integer" );
    return static_cast<std::size_t>( v );
  };
  while ( std::getline( ss, item, ',' ) )
  {
    if ( auto dots = item.find( ".." ); dots != std::string::npos )
    {
      const auto lo = number( item.substr( 0, dots ) ), hi = number( item.substr( dots + 2 ) );
      if ( hi < lo )
        throw CLI::ValidationError( "--n-list: empty range '" + item + "'" );
      for ( auto n = lo; n <= hi; ++n )
        out.push_back( n );
    }
    else
      out.push_back( number( item ) );
  }
  if ( out.empty() )
    throw CLI::ValidationError( "--n-list is empty" );
  return out;
}

struct length_source
{
  std::size_t n = 0;
  std::string list;

  void attach( CLI::App& app )
  {
    auto* a = app.add_option( "--n", n, "input length" );
    auto* b = app.add_option( "--n-list", list, "input lengths, e.g. 4,8,16 or 1..10" );
    a->excludes( b );
  }

  std::vector<std::size_t> values( const std::vector<std::size_t>& fallback = {} ) const
  {
    if ( !list.empty() )
      return parse_n_list( list );
    if ( n )
      return { n };
    if ( fallback.empty() )
      throw CLI::ValidationError( "one of --n or --n-list is required" );
    return fallback;
  }
};

std::string default_out_dir()
{
  const char* env = std::getenv( "SATC_OUT_DIR" );
  return env && *env ? env : ".";
}

/// Write through a temporary file and rename, so readers never see a
/// partial file.
void write_atomic( const fs::path& path, const std::string& text )
{
  if ( path.has_parent_path() )
    fs::create_directories( path.parent_path() );
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out( tmp, std::ios::binary );
    out << text;
    if ( !out )
      throw std::runtime_error( "cannot write " + tmp.string() );
  }
  fs::rename( tmp, path );
}

std::string file_stem( const transformer_spec& sp )
{
  std::string s = sp.name.empty() ? "spec" : sp.name;
  for ( auto& ch : s )
    if ( !std::isalnum( static_cast<unsigned char>( ch ) ) && ch != '-' && ch != '_' )
      ch = '_';
  return s;
}

template<class D>
json values_json( const std::vector<std::vector<D>>& rows )
{
  json j = json::array();
  for ( const auto& r : rows )
  {
    json row = json::array();
    for ( const auto& v : r )
      row.push_back( v.to_string() );
    j.push_back( std::move( row ) );
  }
  return j;
}

template<class D>
json trace_json( const transformer_spec& sp, const value_trace<D>& t )
{
  json layers = json::array();
  for ( std::size_t l = 0; l < t.layers.size(); ++l )
  {
    const auto& lt = t.layers[l];
    json heads = json::array();
    for ( const auto& h : lt.heads )
      heads.push_back( { { "kind", to_string( h.kind ) },
                         { "scores", values_json( h.scores ) },
                         { "ties", h.ties },
                         { "outputs", values_json( h.outputs ) },
                         { "max_output_size", h.max_output_size } } );
    layers.push_back( { { "layer", l }, { "values", values_json( lt.values ) }, { "max_value_size", lt.max_value_size }, { "heads", heads } } );
  }
  return { { "input", sp.detokenize( t.tokens ) },
           { "datatype", arith<D>::name },
           { "layers", layers },
           { "classifier_value", t.classifier_value.to_string() },
           { "accepted", t.accepted } };
}

lookup_mode parse_lookup( const std::string& s )
{
  if ( s == "off" )
    return lookup_mode::off;
  if ( s == "fallback" )
    return lookup_mode::fallback;
  if ( s == "cross-check" )
    return lookup_mode::cross_check;
  throw CLI::ValidationError( "--lookup must be off, fallback or cross-check" );
}

struct plan_choice
{
  std::string mode = "none";
  std::size_t samples = 256;
  std::uint64_t seed = 1;
  std::size_t margin = 2;

  /// nullopt: compile without a plan.
  std::optional<width_plan> make( const transformer_spec& sp, std::size_t n, const compile_options& opt ) const
  {
    if ( mode == "none" )
      return std::nullopt;
    if ( mode == "analytic" )
      return plan_widths( sp, n, plan_mode::analytic, {}, 0, opt );
    if ( mode == "empirical" )
      return plan_widths( sp, n, plan_mode::empirical, random_words( sp.alphabet.size(), n, samples, seed + n ), margin, opt );
    throw CLI::ValidationError( "--plan must be none, analytic or empirical" );
  }
};

compiled compile_any( const transformer_spec& sp, std::size_t n, const width_plan* plan, const compile_options& opt )
{
  return all_hard( sp ) ? compile_hard( sp, n, plan, opt ) : compile_transformer( sp, n, plan, opt );
}

std::string csv_escape( const std::string& s )
{
  if ( s.find_first_of( ",\"\n" ) == std::string::npos )
    return s;
  std::string out = "\"";
  for ( char ch : s )
  {
    if ( ch == '"' )
      out += '"';
    out += ch;
  }
  return out + "\"";
}

// ---- run

struct run_cmd
{
  spec_source src;
  std::vector<std::string> inputs;
  bool trace = false;
  std::string out_dir;

  int operator()() const
  {
    const auto sp = src.load();
    json all = json::array();
    for ( const auto& w : inputs )
    {
      const auto tokens = sp.tokenize( w );
      const auto t = run( sp, tokens );
      const bool acc = std::visit( []( const auto& tr ) { return tr.accepted; }, t );
      std::cout << ( w.empty() ? "\"\"" : w ) << '\t' << ( acc ? "accept" : "reject" ) << '\n';
      if ( trace || !out_dir.empty() )
        all.push_back( std::visit( [&]( const auto& tr ) { return trace_json( sp, tr ); }, t ) );
    }
    if ( trace )
      std::cout << all.dump( 2 ) << '\n';
    if ( !out_dir.empty() )
      write_atomic( fs::path( out_dir ) / ( file_stem( sp ) + ".trace.json" ), all.dump( 2 ) + "\n" );
    return exit_pass;
  }
};

// ---- compile

struct compile_cmd
{
  spec_source src;
  length_source len;
  std::vector<std::string> formats{ "json" };
  std::string out_dir = default_out_dir();
  std::string lookup = "fallback";
  bool values = false;
  plan_choice plan;

  int operator()() const
  {
    const auto sp = src.load();
    compile_options opt;
    opt.lookup = parse_lookup( lookup );
    opt.value_outputs = values;
    for ( const auto& f : formats )
      if ( f != "json" && f != "dot" && f != "csv" )
        throw CLI::ValidationError( "--format must be json, dot or csv" );
    std::string csv = "n,size,depth,threshold_count,max_fanin,nodes,lookups\n";
    for ( auto n : len.values() )
    {
      const auto p = plan.make( sp, n, opt );
      const auto cc = compile_any( sp, n, p ? &*p : nullptr, opt );
      const std::string stem = file_stem( sp ) + "_n" + std::to_string( n );
      const fs::path dir( out_dir );
      auto man = cc.manifest();
      man["kind"] = all_hard( sp ) ? "hard" : "saturated";
      for ( const auto& f : formats )
      {
        if ( f == "json" )
          write_atomic( dir / ( stem + ".circuit.json" ), to_json( cc.c ).dump() + "\n" );
        else if ( f == "dot" )
          write_atomic( dir / ( stem + ".dot" ), to_dot( cc.c ) );
      }
      write_atomic( dir / ( stem + ".manifest.json" ), man.dump( 2 ) + "\n" );
      const auto& s = cc.stats;
      csv += std::to_string( n ) + "," + std::to_string( s.size ) + "," + std::to_string( s.depth ) + "," + std::to_string( s.thresholds ) + "," +
             std::to_string( s.max_fanin ) + "," + std::to_string( s.nodes ) + "," + std::to_string( cc.lookups ) + "\n";
      std::cout << sp.name << " n=" << n << " size=" << s.size << " depth=" << s.depth << " threshold_count=" << s.thresholds
                << " -> " << ( dir / ( stem + ".manifest.json" ) ).string() << '\n';
    }
    if ( std::find( formats.begin(), formats.end(), "csv" ) != formats.end() )
      write_atomic( fs::path( out_dir ) / ( file_stem( sp ) + ".compile.csv" ), csv );
    return exit_pass;
  }
};

// ---- verify

struct verify_cmd
{
  spec_source src;
  length_source len;
  std::string mode = "exhaustive";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::string circuit_file;
  std::string out_dir = default_out_dir();
  std::string lookup = "fallback";
  plan_choice plan;

  int operator()() const
  {
    const auto sp = src.load();
    verify_options vo;
    if ( mode != "exhaustive" && mode != "random" )
      throw CLI::ValidationError( "--mode must be exhaustive or random" );
    vo.mode = mode == "exhaustive" ? verify_mode::exhaustive : verify_mode::random;
    vo.samples = samples;
    vo.seed = seed;
    compile_options opt;
    opt.lookup = parse_lookup( lookup );
    std::vector<verify_row> rows;
    if ( !circuit_file.empty() )
    {
      const auto ns = len.values();
      if ( ns.size() != 1 )
        throw CLI::ValidationError( "--circuit needs a single --n" );
      std::ifstream in( circuit_file );
      std::stringstream ss;
      ss << in.rdbuf();
      const auto c = from_json_text( ss.str() );
      rows.push_back( check_circuit( sp, ns[0], c, verification_words( sp, ns[0], vo ) ) );
    }
    else
    {
      for ( auto n : len.values() )
      {
        const auto p = plan.make( sp, n, opt );
        const auto cc = compile_any( sp, n, p ? &*p : nullptr, opt );
        rows.push_back( check_circuit( sp, n, cc.c, verification_words( sp, n, vo ), p ? &*p : nullptr, vo.batch ) );
      }
    }
    std::string csv = "n,mode,checked,mismatches,machine_errors,counterexample,machine_accept,circuit_accept\n";
    bool pass = true;
    for ( const auto& r : rows )
    {
      pass = pass && r.passed();
      csv += std::to_string( r.n ) + "," + mode + "," + std::to_string( r.checked ) + "," + std::to_string( r.mismatches ) + "," +
             std::to_string( r.machine_errors ) + "," + ( r.counterexample ? csv_escape( sp.detokenize( *r.counterexample ) ) : "" ) + "," +
             ( r.counterexample ? ( r.machine_accept ? "1" : "0" ) : "" ) + "," + ( r.counterexample ? ( r.circuit_accept ? "1" : "0" ) : "" ) +
             "\n";
      for ( const auto& o : r.overflow )
        std::cerr << "overflow at n=" << r.n << ": " << o << '\n';
    }
    std::cout << csv;
    write_atomic( fs::path( out_dir ) / ( file_stem( sp ) + ".verify.csv" ), csv );
    return pass ? exit_pass : exit_mismatch;
  }
};

// ---- complexity

struct complexity_cmd
{
  spec_source src;
  length_source len;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string out_dir = default_out_dir();
  std::string lookup = "fallback";

  int operator()() const
  {
    const auto sp = src.load();
    const auto ns = len.values( { 8, 16, 32, 64 } );
    compile_options opt;
    opt.lookup = parse_lookup( lookup );
    std::map<std::size_t, std::vector<std::vector<std::size_t>>> words;
    for ( auto n : ns )
    {
      const double all = std::pow( double( sp.alphabet.size() ), double( n ) );
      words[n] = all <= double( samples ) ? all_words( sp.alphabet.size(), n ) : random_words( sp.alphabet.size(), n, samples, seed + n );
    }
    const auto sizes = instrument_sizes( sp, words );
    const bool compilable = sp.type == datatype::flt;
    std::vector<std::pair<double, double>> pts;
    std::vector<std::size_t> value_bits;
    std::string csv = "n,size,depth,threshold_count,max_value_bits\n";
    json rows = json::array();
    std::optional<std::size_t> depth0;
    bool depth_constant = true;
    for ( std::size_t t = 0; t < sizes.n_values.size(); ++t )
    {
      const auto n = sizes.n_values[t];
      std::size_t bits = 0;
      for ( auto v : sizes.max_sizes[t] )
        bits = std::max( bits, v );
      for ( auto v : sizes.max_head_sizes[t] )
        bits = std::max( bits, v );
      value_bits.push_back( bits );
      json row{ { "n", n }, { "max_value_bits", bits } };
      std::string line = std::to_string( n ) + ",";
      if ( compilable )
      {
        const auto m = compile_any( sp, n, nullptr, opt ).stats;
        pts.emplace_back( double( n ), double( std::max<std::size_t>( m.size, 1 ) ) );
        depth_constant = depth_constant && ( !depth0 || *depth0 == m.depth );
        depth0 = depth0.value_or( m.depth );
        row["size"] = m.size;
        row["depth"] = m.depth;
        row["threshold_count"] = m.thresholds;
        line += std::to_string( m.size ) + "," + std::to_string( m.depth ) + "," + std::to_string( m.thresholds );
      }
      else
        line += ",,";
      csv += line + "," + std::to_string( bits ) + "\n";
      rows.push_back( row );
    }
    const auto fit = fit_log( sizes.n_values, value_bits );
    json residuals = json::array();
    for ( std::size_t t = 0; t < sizes.n_values.size(); ++t )
      residuals.push_back( fit.at( sizes.n_values[t] ) - double( value_bits[t] ) );
    json report{ { "spec", sp.name },
                 { "rows", rows },
                 { "value_bits_fit", { { "a", fit.a }, { "b", fit.b }, { "envelope_a", fit.envelope_a }, { "residuals", residuals } } },
                 { "samples_per_n", samples },
                 { "seed", seed } };
    if ( compilable )
    {
      report["size_loglog_slope"] = loglog_slope( pts );
      report["depth_constant"] = depth_constant;
    }
    std::cout << csv;
    if ( compilable )
      std::cout << "# size log-log slope " << loglog_slope( pts ) << ( depth_constant ? ", depth constant" : ", depth varies" ) << '\n';
    std::cout << "# max value bits <= " << fit.envelope_a << " + " << fit.b << " log2 n\n";
    const fs::path dir( out_dir );
    write_atomic( dir / ( file_stem( sp ) + ".complexity.csv" ), csv );
    write_atomic( dir / ( file_stem( sp ) + ".complexity.json" ), report.dump( 2 ) + "\n" );
    return exit_pass;
  }
};

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "satc: saturated-attention transformers and their threshold circuits" };
  app.require_subcommand( 1 );

  run_cmd r;
  auto* run_app = app.add_subcommand( "run", "evaluate a spec on input strings" );
  r.src.attach( *run_app );
  run_app->add_option( "--input", r.inputs, "input string (repeatable)" )->required();
  run_app->add_flag( "--trace", r.trace, "print the full value trace as JSON" );
  run_app->add_option( "--out-dir", r.out_dir, "also write the traces here" );

  compile_cmd cc;
  auto* compile_app = app.add_subcommand( "compile", "compile a float spec into threshold circuits" );
  cc.src.attach( *compile_app );
  cc.len.attach( *compile_app );
  compile_app->add_option( "--format", cc.formats, "json, dot, csv (repeatable)" );
  compile_app->add_option( "--out-dir", cc.out_dir, "output directory (default $SATC_OUT_DIR or .)" );
  compile_app->add_option( "--lookup", cc.lookup, "off, fallback or cross-check" );
  compile_app->add_flag( "--values", cc.values, "also output the final value wires" );
  compile_app->add_option( "--plan", cc.plan.mode, "width plan: none, analytic or empirical" );
  compile_app->add_option( "--samples", cc.plan.samples, "sample inputs for an empirical plan" );
  compile_app->add_option( "--seed", cc.plan.seed, "random seed" );
  compile_app->add_option( "--margin", cc.plan.margin, "empirical plan margin" );

  verify_cmd vc;
  auto* verify_app = app.add_subcommand( "verify", "compare compiled circuits with the machine" );
  vc.src.attach( *verify_app );
  vc.len.attach( *verify_app );
  verify_app->add_option( "--mode", vc.mode, "exhaustive or random" );
  verify_app->add_option( "--samples", vc.samples, "inputs per n in random mode" );
  verify_app->add_option( "--seed", vc.seed, "random seed" );
  verify_app->add_option( "--circuit", vc.circuit_file, "verify this circuit JSON instead of compiling" )->check( CLI::ExistingFile );
  verify_app->add_option( "--out-dir", vc.out_dir, "output directory (default $SATC_OUT_DIR or .)" );
  verify_app->add_option( "--lookup", vc.lookup, "off, fallback or cross-check" );
  verify_app->add_option( "--plan", vc.plan.mode, "width plan: none, analytic or empirical" );
  verify_app->add_option( "--margin", vc.plan.margin, "empirical plan margin" );

  complexity_cmd xc;
  auto* complexity_app = app.add_subcommand( "complexity", "circuit size, depth and value sizes across n" );
  xc.src.attach( *complexity_app );
  xc.len.attach( *complexity_app );
  complexity_app->add_option( "--samples", xc.samples, "inputs per n for value sizes" );
  complexity_app->add_option( "--seed", xc.seed, "random seed" );
  complexity_app->add_option( "--out-dir", xc.out_dir, "output directory (default $SATC_OUT_DIR or .)" );
  complexity_app->add_option( "--lookup", xc.lookup, "off, fallback or cross-check" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    const int rc = app.exit( e );
    return rc == 0 ? exit_pass : exit_usage;
  }

  try
  {
    if ( *run_app )
      return r();
    if ( *compile_app )
      return cc();
    if ( *verify_app )
      return vc();
    return xc();
  }
  catch ( const CLI::Error& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( const compile_error& e )
  {
    std::cerr << "compile error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( const parse_error& e )
  {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}
