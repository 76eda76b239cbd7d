#pragma once

#include <string>

#include "sphereflow/dynamics.hpp"

namespace sphereflow {

// Initial-condition recipe.  Exactly one kind is active; keys belonging to
// another kind are rejected by the parser.
struct InitSpec {
  enum class Kind { equilibrium, tilted_rotation, mode, random };
  Kind kind = Kind::equilibrium;

  double c = 1.0;                // equilibrium, tilted_rotation: rotation rate
  std::string axis = "x";        // tilted_rotation: x | y | z
  int l = 2;                     // mode
  int m = 1;                     // mode (sign folded into the real field)
  double amplitude = 1e-4;       // mode, random: vorticity coefficient scale
  unsigned seed = 1;             // random
  double spectrum_slope = -2.0;  // random: |zeta_lm| ~ amplitude l^slope
  int lmax = 5;                  // random: highest seeded degree
};

struct RunConfig {
  int L = 15;
  SimParams params;
  InitSpec init;
  std::string output_dir = ".";
  int cadence = 1;
};

// Flat key = value text with dotted sections and '#' comments.  Keys:
//   sim.L sim.a sim.omega sim.mu_s sim.dt sim.t_end sim.dealias
//   init.type (equilibrium | tilted_rotation | mode | random) + its fields
//   output.dir output.cadence
// Unknown or duplicate keys, malformed values, values violating the
// parameter domains, and init keys from an inactive type all throw
// ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Spectral vorticity for the recipe (t = 0).
SimState make_initial_state(const Model& model, const InitSpec& init);

}  // namespace sphereflow
