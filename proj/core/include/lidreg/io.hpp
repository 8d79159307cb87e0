#pragma once

#include "lidreg/synth.hpp"
#include "lidreg/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lidreg {

/// Shortest decimal text with 17 significant digits ("%.17g").
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Batch CSV: header `batch_id,x_0,...,x_{d-1},y`, rows grouped by batch_id,
// exactly n rows per batch. Batches are indexed in order of first appearance.
// Malformed input throws DataFormatError.

BatchCollection read_batches_csv(std::istream& in);
BatchCollection read_batches_csv(const std::filesystem::path& path);
void write_batches_csv(std::ostream& out, const BatchCollection& coll);
void write_batches_csv(const std::filesystem::path& path, const BatchCollection& coll);

// ---------------------------------------------------------------------------
// Flat config: one `key = value` per line; `#` starts a comment. Vectors are
// comma-separated, lists of vectors (w_stars) semicolon-separated.

using FlatConfig = std::map<std::string, std::string>;

FlatConfig parse_flat_config(std::istream& in);
FlatConfig read_flat_config(const std::filesystem::path& path);

const std::vector<std::string>& algo_config_keys();
const std::vector<std::string>& generator_spec_keys();

/// Throws DataFormatError for any key that is neither an AlgoConfig nor a
/// GeneratorSpec key.
void check_known_keys(const FlatConfig& flat);

/// Reads the AlgoConfig keys present in `flat` over `base`; other keys are ignored.
AlgoConfig algo_config_from_flat(const FlatConfig& flat, AlgoConfig base = {});
/// Reads the GeneratorSpec keys present in `flat` over `base`. When w_stars
/// is absent, k regressors of norm w_radius and pairwise distance
/// >= w_separation are drawn from the seed.
GeneratorSpec generator_spec_from_flat(const FlatConfig& flat, GeneratorSpec base = {});

std::string to_flat(const AlgoConfig& cfg);
std::string to_flat(const GeneratorSpec& spec);

Vector parse_vector(const std::string& text);
std::string format_vector(const Vector& v);

}  // namespace lidreg
