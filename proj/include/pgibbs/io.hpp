#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgibbs/dynamic.hpp"
#include "pgibbs/spin_system.hpp"

namespace pgibbs {

// Instance JSON:
//   {"q": int, "n": int, "edges": [[u, v], ...],
//    "b": [[q weights] per vertex] | "uniform",
//    "A": {"default": [[q x q]], "overrides": [{"edge": [u, v], "matrix": [[...]]}]}}
// Weights are JSON numbers or decimal strings; both are read exactly, so a
// file gives the same rational system whichever numeric mode runs it.
// "A" may be omitted when there are no edges. Throws InvalidInput.
ExactSpinSystem parse_instance(std::string_view text);
ExactSpinSystem load_instance(const std::filesystem::path& path);
std::string instance_to_json(const ExactSpinSystem& sys);

// Update JSON: {"vertices": [{"v": int, "b": [...]}], "edges": [{"edge": [u, v], "matrix": [[...]]}]}.
UpdateBatch<Rational> parse_update(std::string_view text, std::size_t q);
UpdateBatch<Rational> load_update(const std::filesystem::path& path, std::size_t q);
UpdateBatch<double> to_float(const UpdateBatch<Rational>& upd);

// One configuration per line, spins separated by single spaces.
void write_configurations(std::ostream& out, std::span<const Configuration> samples);
std::vector<Configuration> read_configurations(std::istream& in);

}  // namespace pgibbs
