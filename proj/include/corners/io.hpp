#pragma once

#include <string>
#include <vector>

#include "corners/bohr.hpp"
#include "corners/grid.hpp"
#include "corners/harmonic.hpp"
#include "corners/intset.hpp"
#include "corners/recurrence.hpp"

namespace corners {

inline constexpr const char* artifact_version = "0.1.0";

// plain text: one "x y" line per point; parsing tolerates blank lines
std::string points_to_text(const grid_set& s);
grid_set points_from_text(const std::string& text);

std::string grid_set_to_json(const grid_set& s);
grid_set grid_set_from_json(const std::string& text);

// newline-separated decimals
std::string int_set_to_text(const int_set& s);
int_set int_set_from_text(const std::string& text);

std::string bohr_spec_to_json(const bohr_spec& spec);
bohr_spec bohr_spec_from_json(const std::string& text);

std::string spectrum_to_json(const spectrum& sp);

// sparse functions as CSV with a header row, one support point per row
std::string supp_fn_to_csv(const supp_fn& f);
std::string grid_fn_to_csv(const grid_fn& f);

std::string finite_system_to_json(const finite_system& sys);
finite_system finite_system_from_json(const std::string& text);

// standalone polyline chart plus the backing two-column table
std::string plot_csv(const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& xs, const std::vector<double>& ys);
std::string plot_svg(const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace corners
