#pragma once

// Experiment configuration: a strict TOML-subset parser (sections, scalars,
// inline number arrays) and the fully-resolved ExperimentConfig with defaults.

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pum/seminorm.hpp"
#include "pum/scheme.hpp"

namespace pumrun {

// invalid configuration (exit code 2, vs 3 for numerical failures)
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;
using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

// Sections, `key = value`, strings, numbers, booleans, `[..]` number arrays,
// `#` comments. Throws ConfigError with a line number on anything else.
ConfigTable parse_config_text(const std::string& text);
ConfigTable parse_config_file(const std::string& path);

struct ExperimentConfig {
    std::string experiment;

    // mesh: either a generator or a polygon-mesh file
    std::string mesh_file;
    std::string generator = "cartesian";  // cartesian | alternating | hexagonal | disc
    double mesh_h = 0.125;
    int margin = 1;
    double radius = 0.0;  // mollification radius; 0 → h/4
    int refinements = 3;  // disc only
    pum::Box domain{{0, 0}, {1, 1}};

    std::string field = "constant";  // constant | rotation | shear | rough
    double bx = 1.0, by = 0.0;       // constant
    double cx = 0.5, cy = 0.5, omega = 1.0;  // rotation
    double rate = 1.0;               // shear
    int max_mode = 3;                // rough
    double decay = 2.0, amplitude = 1.0;
    double oscillate = 0.0;          // cos(2πft) factor, 0 = off

    std::string initial = "bump";    // bump | cone
    double icx = 0.5, icy = 0.5, iradius = 0.2;

    double T = 0.2;
    int outputs = 4;

    pum::StepperSpec stepper;
    pum::SemiNormParams seminorm;

    std::vector<double> h_list;      // example16 / residue-decay scans
    std::vector<double> s_list{0.3, 0.4, 0.5, 0.6, 0.7};
    int directions = 16;

    std::string out_dir = "out";
    unsigned seed = 0;
    int workers = 1;
    bool quiet = false;
};

// Strict mapping: unknown sections, keys, or enum values are ConfigErrors, as
// are out-of-range parameters.
ExperimentConfig resolve_config(const ConfigTable& table);

// full resolved config (defaults included) for the summary JSON
nlohmann::json config_to_json(const ExperimentConfig& cfg);

std::string catalog_text();
nlohmann::json catalog_json();  // each entry carries a runnable sample_config

}  // namespace pumrun
