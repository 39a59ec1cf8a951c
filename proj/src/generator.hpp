// Schema-aware random JSON instance generator.  Seeded and deterministic;
// biased toward the schemas' constants, required names, pattern witnesses,
// and numeric/length bounds (including off-by-one neighbours).
#ifndef JSALG_GENERATOR_HPP
#define JSALG_GENERATOR_HPP

#include "algebra.hpp"
#include "json_value.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace jsalg {

class InstanceGenerator {
 public:
  explicit InstanceGenerator(uint64_t seed = 0);

  // Harvest constants, key names, pattern witnesses and bounds from a
  // document so samples hit the schema's interesting corners.
  void add_hints(const Document& d);
  void add_hints(const SchemaPtr& s);

  JsonPtr generate();

 private:
  JsonPtr gen_value(int depth);
  std::string gen_string();
  Rational gen_number();
  uint64_t gen_size();

  std::mt19937_64 rng_;
  std::vector<JsonPtr> hint_values_;
  std::vector<std::string> hint_strings_;
  std::vector<Rational> hint_numbers_;
  std::vector<uint64_t> hint_sizes_;
};

}  // namespace jsalg

#endif  // JSALG_GENERATOR_HPP
