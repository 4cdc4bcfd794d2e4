#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsmv/cardinality.hpp"
#include "rsmv/closed_form.hpp"
#include "rsmv/dc_solver.hpp"
#include "rsmv/market_model.hpp"

namespace rsmv {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips, independent of the locale.
std::string format_double(double v);
std::string format_int(long long v);

/// Header row of asset ids, then one row of decimal returns per period.
ReturnsTable parse_returns_csv(std::istream& in, const std::string& source = "<input>");
ReturnsTable read_returns_csv(const std::string& path);

/// {"mean": [...], "cov": [[...], ...]}
MarketModel parse_market_json(const std::string& text, const std::string& source = "<input>");
MarketModel read_market_json(const std::string& path);
Json market_to_json(const MarketModel& m);

/// Numbers separated by commas, whitespace or newlines, or a JSON array.
Vector read_vector_file(const std::string& path);

/// Grid spec: "a:b:step" (inclusive), or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

Json portfolio_to_json(const Portfolio& p);
Json report_to_json(const SolveReport& r, const DcProblem& p);
std::string report_csv_header();
std::string report_csv_row(const SolveReport& r);

std::string frontier_csv_header();
std::string frontier_csv_row(std::string_view kind, double epsilon, const FrontierPoint& pt);

std::string surface_csv(const std::vector<SurfaceCell>& cells);
Json surface_to_json(const std::vector<SurfaceCell>& cells, const std::vector<double>& epsilon_grid,
                     const std::vector<double>& phi_grid, std::string_view backend);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rsmv
