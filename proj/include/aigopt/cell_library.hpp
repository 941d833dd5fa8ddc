/*!
  \file cell_library.hpp
  \brief Parametric standard-cell library, its text format, and NPN match tables
*/

#pragma once

#include "truth_table.hpp"
#include "util.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace aigopt
{

/*! \brief A combinational cell with a linear load-dependent delay.
 *
 * Bit `m` of `function` is the output for the input assignment where pin `i`
 * carries bit `i` of `m`.
 */
struct Cell
{
  std::string name;
  uint32_t num_inputs{ 0 };
  uint16_t function{ 0 };
  double area{ 0 };
  std::vector<double> input_caps;
  double intrinsic_delay{ 0 };
  double load_slope{ 0 };
};

class LibraryError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Cell pins assigned to cut leaves, with per-pin input inversion. */
struct CellMatch
{
  uint32_t cell{ 0 };
  std::array<uint8_t, 4> pin_leaf{};
  uint8_t pin_negated{ 0 };
};

class CellLibrary
{
public:
  CellLibrary() = default;
  CellLibrary( std::vector<Cell> cells, double wire_cap_per_fanout, double default_output_load, std::string name = "custom" )
      : name_( std::move( name ) ), cells_( std::move( cells ) ), wire_cap_( wire_cap_per_fanout ), output_load_( default_output_load )
  {
    validate();
    build_matches();
  }

  /*! \brief Built-in eleven-cell library; values are artifact constants in ns / unit capacitance / unit area. */
  static CellLibrary default_library()
  {
    auto cell = []( std::string n, uint32_t k, uint16_t f, double area, double cap, double d, double s ) {
      return Cell{ std::move( n ), k, f, area, std::vector<double>( k, cap ), d, s };
    };
    return CellLibrary(
        {
            cell( "INV", 1, 0x1, 1.00, 1.0, 0.020, 0.010 ),
            cell( "NAND2", 2, 0x7, 1.33, 1.0, 0.030, 0.012 ),
            cell( "NAND3", 3, 0x7f, 1.67, 1.1, 0.045, 0.016 ),
            cell( "AND2", 2, 0x8, 1.67, 1.0, 0.050, 0.010 ),
            cell( "NOR2", 2, 0x1, 1.33, 1.0, 0.035, 0.016 ),
            cell( "OR2", 2, 0xe, 1.67, 1.0, 0.055, 0.011 ),
            cell( "XOR2", 2, 0x6, 2.67, 1.6, 0.070, 0.018 ),
            cell( "AOI21", 3, 0x07, 1.67, 1.1, 0.045, 0.018 ), // !((a & b) | c)
            cell( "OAI21", 3, 0x1f, 1.67, 1.1, 0.045, 0.018 ), // !((a | b) & c)
            cell( "MUX2", 3, 0xca, 3.00, 1.3, 0.070, 0.014 ),  // c ? b : a
            cell( "AND4", 4, 0x8000, 2.33, 1.1, 0.080, 0.012 ),
        },
        0.2, 2.0, "default" );
  }

  std::string const& name() const { return name_; }
  std::vector<Cell> const& cells() const { return cells_; }
  Cell const& cell( uint32_t i ) const { return cells_[i]; }
  double wire_cap_per_fanout() const { return wire_cap_; }
  double default_output_load() const { return output_load_; }
  uint32_t inverter() const { return inverter_; }

  /*! \brief Mean pin capacitance over all cells, used as the mapper's load estimate. */
  double mean_input_cap() const { return mean_cap_; }

  /*! \brief Cells (with pin assignment) implementing the `k`-input function `f` (padded to 16 bits). */
  std::vector<CellMatch> const& matches( uint32_t k, uint16_t f ) const
  {
    static std::vector<CellMatch> const none;
    auto it = matches_.find( key( k, f ) );
    return it == matches_.end() ? none : it->second;
  }

  /*! \brief Rank of each cell by name, for deterministic tie-breaking. */
  uint32_t name_rank( uint32_t cell ) const { return name_rank_[cell]; }

  CellLibrary with_intrinsic_delay( uint32_t cell, double delay ) const
  {
    auto cells = cells_;
    cells[cell].intrinsic_delay = delay;
    return CellLibrary( std::move( cells ), wire_cap_, output_load_, name_ );
  }

private:
  static uint32_t key( uint32_t k, uint16_t f ) { return ( k << 16 ) | f; }

  void validate()
  {
    bool has_inv = false, has_and2 = false;
    for ( uint32_t i = 0; i < cells_.size(); ++i )
    {
      auto const& c = cells_[i];
      if ( c.num_inputs < 1 || c.num_inputs > 4 )
        throw LibraryError( "cell " + c.name + ": needs 1 to 4 inputs" );
      if ( c.input_caps.size() != c.num_inputs )
        throw LibraryError( "cell " + c.name + ": input_caps count differs from inputs" );
      if ( !( c.area > 0 ) )
        throw LibraryError( "cell " + c.name + ": area must be positive" );
      if ( !std::isfinite( c.area ) || !std::isfinite( c.intrinsic_delay ) || !std::isfinite( c.load_slope ) )
        throw LibraryError( "cell " + c.name + ": values must be finite" );
      if ( c.intrinsic_delay < 0 || c.load_slope < 0 )
        throw LibraryError( "cell " + c.name + ": delays must be non-negative" );
      for ( auto cap : c.input_caps )
        if ( !( cap >= 0 ) || !std::isfinite( cap ) )
          throw LibraryError( "cell " + c.name + ": capacitances must be non-negative" );
      uint32_t bits = 1u << c.num_inputs;
      if ( bits < 16 && ( c.function >> bits ) != 0 )
        throw LibraryError( "cell " + c.name + ": truth table wider than 2^inputs bits" );
      if ( c.num_inputs == 1 && c.function == 0x1 )
      {
        if ( !has_inv || c.area < cells_[inverter_].area )
          inverter_ = i;
        has_inv = true;
      }
      if ( c.num_inputs == 2 )
      {
        // AND-capable: some input/output phase assignment yields AND
        uint32_t ones = std::popcount( static_cast<uint32_t>( c.function & 0xf ) );
        has_and2 = has_and2 || ones == 1 || ones == 3;
      }
    }
    if ( !has_inv )
      throw LibraryError( "library needs an inverter" );
    if ( !has_and2 )
      throw LibraryError( "library needs a two-input AND-type cell" );
  }

  void build_matches()
  {
    double total_cap = 0;
    uint32_t pins = 0;
    for ( auto const& c : cells_ )
    {
      for ( auto cap : c.input_caps )
      {
        total_cap += cap;
        ++pins;
      }
    }
    mean_cap_ = pins ? total_cap / pins : 0.0;

    std::vector<uint32_t> order( cells_.size() );
    for ( uint32_t i = 0; i < order.size(); ++i )
      order[i] = i;
    std::sort( order.begin(), order.end(), [&]( uint32_t a, uint32_t b ) { return cells_[a].name < cells_[b].name; } );
    name_rank_.assign( cells_.size(), 0 );
    for ( uint32_t r = 0; r < order.size(); ++r )
      name_rank_[order[r]] = r;

    for ( uint32_t ci = 0; ci < cells_.size(); ++ci )
    {
      auto const& c = cells_[ci];
      uint32_t k = c.num_inputs;
      std::array<uint8_t, 4> perm{ 0, 1, 2, 3 };
      do
      {
        for ( uint32_t neg = 0; neg < ( 1u << k ); ++neg )
        {
          // leaf assignment x -> pin values
          uint16_t g = 0;
          for ( uint32_t x = 0; x < ( 1u << k ); ++x )
          {
            uint32_t pin_values = 0;
            for ( uint32_t p = 0; p < k; ++p )
              pin_values |= ( ( ( x >> perm[p] ) & 1u ) ^ ( ( neg >> p ) & 1u ) ) << p;
            if ( ( c.function >> pin_values ) & 1u )
              g |= static_cast<uint16_t>( 1u << x );
          }
          uint16_t padded = tt4::extend( g, k );
          if ( tt4::support( padded ) != ( 1u << k ) - 1u )
            continue;
          CellMatch m{ ci, perm, static_cast<uint8_t>( neg ) };
          auto& list = matches_[key( k, padded )];
          bool dup = false;
          for ( auto const& e : list )
            dup = dup || ( e.cell == m.cell && e.pin_leaf == m.pin_leaf && e.pin_negated == m.pin_negated );
          if ( !dup )
            list.push_back( m );
        }
      } while ( std::next_permutation( perm.begin(), perm.begin() + k ) );
    }
  }

  std::string name_;
  std::vector<Cell> cells_;
  double wire_cap_{ 0 };
  double output_load_{ 0 };
  uint32_t inverter_{ 0 };
  double mean_cap_{ 0 };
  std::vector<uint32_t> name_rank_;
  std::unordered_map<uint32_t, std::vector<CellMatch>> matches_;
};

namespace detail
{

inline std::string trim( std::string const& s )
{
  size_t a = s.find_first_not_of( " \t\r" );
  if ( a == std::string::npos )
    return {};
  size_t b = s.find_last_not_of( " \t\r" );
  return s.substr( a, b - a + 1 );
}

inline std::string truth_table_hex( uint16_t f, uint32_t k )
{
  uint32_t digits = k <= 2 ? 1 : ( 1u << k ) / 4;
  std::string s;
  for ( uint32_t d = digits; d-- > 0; )
    s += "0123456789abcdef"[( f >> ( 4 * d ) ) & 0xf];
  return s;
}

} // namespace detail

/*! \brief Serializes a library in the sectioned key-value text format. */
inline std::string emit_library( CellLibrary const& lib )
{
  std::ostringstream os;
  os << "[library]\n";
  os << "name = " << lib.name() << '\n';
  os << "wire_cap_per_fanout = " << format_double( lib.wire_cap_per_fanout() ) << '\n';
  os << "default_output_load = " << format_double( lib.default_output_load() ) << '\n';
  for ( auto const& c : lib.cells() )
  {
    os << "\n[cell]\n";
    os << "name = " << c.name << '\n';
    os << "inputs = " << c.num_inputs << '\n';
    os << "function = " << detail::truth_table_hex( c.function, c.num_inputs ) << '\n';
    os << "area = " << format_double( c.area ) << '\n';
    os << "input_caps =";
    for ( auto cap : c.input_caps )
      os << ' ' << format_double( cap );
    os << '\n';
    os << "intrinsic_delay = " << format_double( c.intrinsic_delay ) << '\n';
    os << "load_slope = " << format_double( c.load_slope ) << '\n';
  }
  return os.str();
}

/*! \brief Parses the sectioned key-value library format (see docs/formats.md). */
inline CellLibrary parse_library( std::string const& text )
{
  std::istringstream is( text );
  std::string line;
  uint32_t line_no = 0;
  enum class section
  {
    none,
    library,
    cell
  } current = section::none;
  std::string lib_name = "custom";
  std::optional<double> wire_cap, output_load;
  std::vector<Cell> cells;
  std::vector<std::map<std::string, std::string>> cell_fields;

  auto fail = [&]( std::string const& msg ) -> LibraryError { return LibraryError( "line " + std::to_string( line_no ) + ": " + msg ); };

  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
      line = line.substr( 0, hash );
    line = detail::trim( line );
    if ( line.empty() )
      continue;
    if ( line == "[library]" )
    {
      current = section::library;
      continue;
    }
    if ( line == "[cell]" )
    {
      current = section::cell;
      cell_fields.emplace_back();
      continue;
    }
    auto eq = line.find( '=' );
    if ( eq == std::string::npos )
      throw fail( "expected 'key = value'" );
    std::string k = detail::trim( line.substr( 0, eq ) ), v = detail::trim( line.substr( eq + 1 ) );
    try
    {
      if ( current == section::library )
      {
        if ( k == "name" )
          lib_name = v;
        else if ( k == "wire_cap_per_fanout" )
          wire_cap = parse_double( v );
        else if ( k == "default_output_load" )
          output_load = parse_double( v );
        else
          throw fail( "unknown library key '" + k + "'" );
      }
      else if ( current == section::cell )
      {
        if ( !cell_fields.back().emplace( k, v ).second )
          throw fail( "duplicate key '" + k + "'" );
      }
      else
      {
        throw fail( "key outside of a section" );
      }
    }
    catch ( std::invalid_argument const& e )
    {
      throw fail( e.what() );
    }
  }
  if ( !wire_cap || !output_load )
    throw LibraryError( "missing [library] wire_cap_per_fanout or default_output_load" );

  for ( auto const& f : cell_fields )
  {
    auto get = [&]( char const* key ) -> std::string const& {
      auto it = f.find( key );
      if ( it == f.end() )
        throw LibraryError( std::string( "cell is missing '" ) + key + "'" );
      return it->second;
    };
    Cell c;
    c.name = get( "name" );
    try
    {
      size_t used = 0;
      auto const& inputs = get( "inputs" );
      c.num_inputs = static_cast<uint32_t>( std::stoul( inputs, &used ) );
      if ( used != inputs.size() )
        throw std::invalid_argument( "bad input count '" + inputs + "'" );
      auto const& fn = get( "function" );
      unsigned long f = std::stoul( fn, &used, 16 );
      if ( used != fn.size() || f > 0xffff )
        throw std::invalid_argument( "bad truth table '" + fn + "'" );
      c.function = static_cast<uint16_t>( f );
      c.area = parse_double( get( "area" ) );
      std::istringstream caps( get( "input_caps" ) );
      std::string tok;
      while ( caps >> tok )
        c.input_caps.push_back( parse_double( tok ) );
      c.intrinsic_delay = parse_double( get( "intrinsic_delay" ) );
      c.load_slope = parse_double( get( "load_slope" ) );
    }
    catch ( std::logic_error const& e )
    {
      throw LibraryError( "cell " + c.name + ": " + e.what() );
    }
    cells.push_back( std::move( c ) );
  }
  return CellLibrary( std::move( cells ), *wire_cap, *output_load, lib_name );
}

inline CellLibrary read_library_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw LibraryError( "cannot open " + path );
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_library( ss.str() );
}

} // namespace aigopt
