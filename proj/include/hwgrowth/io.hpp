#pragma once

// Measure files and report serialization.
//
// Measure CSV: header `re,im,mass` (the mass column is optional and defaults
// to 1), one atom per row. Measure JSON: an array of {"re", "im", "mass"}.
// Numbers are written in shortest round-trip form.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "hwgrowth/bounds.hpp"
#include "hwgrowth/measures.hpp"

namespace hwgrowth::io {

/// Shortest decimal that parses back to exactly x ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_number(double x);

/// Throws ParseError carrying the 1-based line number.
DiscreteMeasure parse_measure_csv(std::istream& in);
DiscreteMeasure parse_measure_json(std::istream& in);

/// Chooses the parser from the extension (.json, otherwise CSV).
DiscreteMeasure read_measure(const std::string& path);

void write_measure_csv(std::ostream& out, const DiscreteMeasure& m);

void write_bound_report_json(std::ostream& out, const BoundReport& report);
void write_bound_report_csv(std::ostream& out, const BoundReport& report);
/// Several reports from one seeded sweep.
void write_bound_sweep_json(std::ostream& out, std::span<const BoundReport> reports);
void write_bound_sweep_csv(std::ostream& out, std::span<const BoundReport> reports);

void write_type_report_json(std::ostream& out, const TypeBoundReport& report);
void write_type_report_csv(std::ostream& out, const TypeBoundReport& report);

}  // namespace hwgrowth::io
