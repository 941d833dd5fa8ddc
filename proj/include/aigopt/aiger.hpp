/*!
  \file aiger.hpp
  \brief Reader and writer for the combinational subset of ASCII AIGER ("aag")
*/

#pragma once

#include "aig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aigopt
{

enum class aiger_error_kind
{
  malformed_header,
  malformed_line,
  latches_unsupported,
  dangling_literal,
  cyclic_definition,
  io
};

class AigerError : public std::runtime_error
{
public:
  AigerError( aiger_error_kind kind, uint32_t line, std::string const& what )
      : std::runtime_error( "line " + std::to_string( line ) + ": " + what ), kind_( kind ), line_( line )
  {
  }

  aiger_error_kind kind() const { return kind_; }
  uint32_t line() const { return line_; }

private:
  aiger_error_kind kind_;
  uint32_t line_;
};

namespace detail
{

inline std::vector<uint32_t> parse_unsigned_fields( std::string_view line, uint32_t line_no, aiger_error_kind kind )
{
  std::vector<uint32_t> values;
  size_t pos = 0;
  while ( pos < line.size() )
  {
    while ( pos < line.size() && ( line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r' ) )
    {
      ++pos;
    }
    if ( pos >= line.size() )
    {
      break;
    }
    uint32_t v{};
    auto [ptr, ec] = std::from_chars( line.data() + pos, line.data() + line.size(), v );
    if ( ec != std::errc{} )
    {
      throw AigerError( kind, line_no, "expected unsigned integer in '" + std::string( line ) + "'" );
    }
    values.push_back( v );
    pos = static_cast<size_t>( ptr - line.data() );
    if ( pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r' )
    {
      throw AigerError( kind, line_no, "unexpected character in '" + std::string( line ) + "'" );
    }
  }
  return values;
}

} // namespace detail

/*! \brief Parses an ASCII AIGER document.
 *
 * Only combinational files are accepted.  AND definitions may appear in
 * any order; the result is renumbered topologically, structurally hashed,
 * and stripped of logic that no output uses.  Symbol tables and the
 * trailing comment section are ignored.
 */
inline Aig parse_aiger( std::string_view text, std::string name = {} )
{
  std::vector<std::string_view> lines;
  for ( size_t start = 0; start <= text.size(); )
  {
    size_t end = text.find( '\n', start );
    if ( end == std::string_view::npos )
    {
      end = text.size();
    }
    lines.push_back( text.substr( start, end - start ) );
    start = end + 1;
  }

  if ( lines.empty() || lines[0].substr( 0, 4 ) != "aag " )
  {
    throw AigerError( aiger_error_kind::malformed_header, 1, "expected 'aag M I L O A' header" );
  }
  auto header = detail::parse_unsigned_fields( lines[0].substr( 4 ), 1, aiger_error_kind::malformed_header );
  if ( header.size() != 5 )
  {
    throw AigerError( aiger_error_kind::malformed_header, 1, "header needs exactly five counts" );
  }
  uint32_t const max_var = header[0], num_inputs = header[1], num_latches = header[2], num_outputs = header[3], num_ands = header[4];
  if ( num_latches != 0 )
  {
    throw AigerError( aiger_error_kind::latches_unsupported, 1, "latches are not supported" );
  }
  if ( uint64_t( num_inputs ) + num_ands > max_var )
  {
    throw AigerError( aiger_error_kind::malformed_header, 1, "M is smaller than I + L + A" );
  }
  if ( lines.size() < 1ull + num_inputs + num_outputs + num_ands )
  {
    throw AigerError( aiger_error_kind::malformed_header, static_cast<uint32_t>( lines.size() ), "file ends before all declared lines" );
  }

  enum class var_kind : uint8_t
  {
    undefined,
    input,
    and_gate
  };
  std::vector<var_kind> kinds( max_var + 1, var_kind::undefined );
  std::vector<std::pair<uint32_t, uint32_t>> and_rhs( max_var + 1 );
  std::vector<uint32_t> def_line( max_var + 1, 0 );
  kinds[0] = var_kind::input; // constant, never expanded

  auto check_literal = [&]( uint32_t lit, uint32_t line_no ) {
    if ( lit / 2 > max_var )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "literal " + std::to_string( lit ) + " exceeds 2M+1" );
    }
  };

  uint32_t line_no = 1;
  std::vector<uint32_t> input_vars;
  for ( uint32_t i = 0; i < num_inputs; ++i )
  {
    ++line_no;
    auto f = detail::parse_unsigned_fields( lines[line_no - 1], line_no, aiger_error_kind::malformed_line );
    if ( f.size() != 1 || f[0] < 2 || ( f[0] & 1u ) )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "input must be a single positive even literal" );
    }
    check_literal( f[0], line_no );
    uint32_t v = f[0] / 2;
    if ( kinds[v] != var_kind::undefined )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "variable " + std::to_string( v ) + " defined twice" );
    }
    kinds[v] = var_kind::input;
    def_line[v] = line_no;
    input_vars.push_back( v );
  }

  std::vector<std::pair<uint32_t, uint32_t>> outputs; // literal, line
  for ( uint32_t i = 0; i < num_outputs; ++i )
  {
    ++line_no;
    auto f = detail::parse_unsigned_fields( lines[line_no - 1], line_no, aiger_error_kind::malformed_line );
    if ( f.size() != 1 )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "output must be a single literal" );
    }
    check_literal( f[0], line_no );
    outputs.emplace_back( f[0], line_no );
  }

  std::vector<uint32_t> and_vars;
  for ( uint32_t i = 0; i < num_ands; ++i )
  {
    ++line_no;
    auto f = detail::parse_unsigned_fields( lines[line_no - 1], line_no, aiger_error_kind::malformed_line );
    if ( f.size() != 3 || f[0] < 2 || ( f[0] & 1u ) )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "AND line must be 'lhs rhs0 rhs1' with even lhs" );
    }
    for ( auto lit : f )
    {
      check_literal( lit, line_no );
    }
    uint32_t v = f[0] / 2;
    if ( kinds[v] != var_kind::undefined )
    {
      throw AigerError( aiger_error_kind::malformed_line, line_no, "variable " + std::to_string( v ) + " defined twice" );
    }
    kinds[v] = var_kind::and_gate;
    and_rhs[v] = { f[1], f[2] };
    def_line[v] = line_no;
    and_vars.push_back( v );
  }

  auto check_defined = [&]( uint32_t lit, uint32_t at_line ) {
    if ( kinds[lit / 2] == var_kind::undefined )
    {
      throw AigerError( aiger_error_kind::dangling_literal, at_line, "literal " + std::to_string( lit ) + " references an undefined variable" );
    }
  };
  for ( auto v : and_vars )
  {
    check_defined( and_rhs[v].first, def_line[v] );
    check_defined( and_rhs[v].second, def_line[v] );
  }
  for ( auto [lit, at] : outputs )
  {
    check_defined( lit, at );
  }

  AigBuilder builder;
  builder.reserve( max_var + 1 );
  std::vector<Edge> var_edge( max_var + 1, Edge::constant( false ) );
  for ( auto v : input_vars )
  {
    var_edge[v] = builder.create_pi();
  }
  auto to_edge = [&]( uint32_t lit ) { return var_edge[lit / 2] ^ ( ( lit & 1u ) != 0 ); };

  // 0 = unvisited, 1 = on stack, 2 = built
  std::vector<uint8_t> state( max_var + 1, 0 );
  std::vector<uint32_t> stack;
  for ( auto root : and_vars )
  {
    if ( state[root] == 2 )
    {
      continue;
    }
    stack.push_back( root );
    while ( !stack.empty() )
    {
      uint32_t v = stack.back();
      if ( state[v] == 2 )
      {
        stack.pop_back();
        continue;
      }
      state[v] = 1;
      bool ready = true;
      for ( uint32_t lit : { and_rhs[v].first, and_rhs[v].second } )
      {
        uint32_t u = lit / 2;
        if ( kinds[u] != var_kind::and_gate || state[u] == 2 )
        {
          continue;
        }
        if ( state[u] == 1 )
        {
          throw AigerError( aiger_error_kind::cyclic_definition, def_line[v], "combinational cycle through variable " + std::to_string( u ) );
        }
        stack.push_back( u );
        ready = false;
      }
      if ( ready )
      {
        var_edge[v] = builder.create_and( to_edge( and_rhs[v].first ), to_edge( and_rhs[v].second ) );
        state[v] = 2;
        stack.pop_back();
      }
    }
  }

  for ( auto [lit, at] : outputs )
  {
    builder.create_po( to_edge( lit ) );
  }
  return builder.build( std::move( name ) );
}

/*! \brief Writes `aig` as ASCII AIGER with inputs 2..2I and ANDs in node order. */
inline std::string emit_aiger( Aig const& aig )
{
  std::string out;
  out.reserve( 16u * ( aig.num_ands() + aig.num_pos() + aig.num_pis() ) + 32u );
  auto put = [&out]( uint32_t v ) {
    char buf[16];
    auto [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), v );
    out.append( buf, ptr );
  };
  out += "aag ";
  put( aig.num_nodes() - 1 );
  out += ' ';
  put( aig.num_pis() );
  out += " 0 ";
  put( aig.num_pos() );
  out += ' ';
  put( aig.num_ands() );
  out += '\n';
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    put( 2 * aig.pi_node( i ) );
    out += '\n';
  }
  for ( auto po : aig.pos() )
  {
    put( po.literal() );
    out += '\n';
  }
  aig.foreach_and( [&]( node_id n ) {
    put( 2 * n );
    out += ' ';
    put( aig.fanin1( n ).literal() );
    out += ' ';
    put( aig.fanin0( n ).literal() );
    out += '\n';
  } );
  return out;
}

inline Aig read_aiger_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw AigerError( aiger_error_kind::io, 0, "cannot open " + path );
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if ( auto slash = name.find_last_of( '/' ); slash != std::string::npos )
  {
    name = name.substr( slash + 1 );
  }
  if ( auto dot = name.rfind( '.' ); dot != std::string::npos )
  {
    name = name.substr( 0, dot );
  }
  return parse_aiger( ss.str(), name );
}

inline void write_aiger_file( Aig const& aig, std::string const& path )
{
  std::ofstream out( path );
  if ( !out )
  {
    throw AigerError( aiger_error_kind::io, 0, "cannot write " + path );
  }
  out << emit_aiger( aig );
}

} // namespace aigopt
