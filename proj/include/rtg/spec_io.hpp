#pragma once

#include <json.hpp>
#include <string>

#include "rtg/family.hpp"
#include "rtg/fragsim.hpp"
#include "rtg/measure.hpp"
#include "rtg/model.hpp"
#include "rtg/partition.hpp"
#include "rtg/tree.hpp"

namespace rtg {

using json = nlohmann::json;

// Rationals travel as "p/q" strings; plain JSON numbers are accepted on input.
Rational rational_from_json(const json& j);

json partition_to_json(const Partition& p);        // {"n": 3, "blocks": [[1,3],[2]]}
Partition partition_from_json(const json& j);

// {"kind": "step", "start": j, "phases": [{"from": n, "x": "p/q"}, ...]}
// {"kind": "modulo", "m": 3}
// {"kind": "paintbox", "s": [0.5, 0.5], "seed": 1}
json family_to_json(const PartitionFamily& f);
FamilyPtr family_from_json(const json& j);

// {"kind": "alpha_theta", "alpha": "1/2", "theta": "1/2"}; ford, alpha_gamma,
// poisson_dirichlet, and {"kind": "from_kappa", "measure": {...}}
json model_to_json(const GrowthModel& m);
GrowthModel model_from_json(const json& j);

// finite_atomic {atoms: [{family, weight}], tail: {gamma, first}}, ordered_beta
// {alpha, theta}, paintbox {atoms: [{s, weight}]}, brownian, from_growth_rule
// {model, lambda2}; an optional "scale" multiplies the measure.
json measure_to_json(const DislocationMeasure& d);
DislocationMeasure measure_from_json(const json& j);

// {"root": 0, "edges": [[parent, child, length], ...], "leaf_labels": {"id": label}}
json tree_to_json(const LabelledTree& t);
LabelledTree tree_from_json(const json& j);

// nested {"mass", "hold", "children": [...]}
json massfrag_to_json(const MassFragTree& t);

// Reads a JSON document; throws SpecError with the parser message on bad input.
json parse_json_text(const std::string& text);

}  // namespace rtg
