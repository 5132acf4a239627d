#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrsim/types.hpp"
#include "mrsim/workloads.hpp"

namespace mrsim {

// Workload files: {"version":1, "steps":[...]} where each step carries its
// elements, reduce rule, and optional placement. A step after the first may
// instead carry a "chain" rule and no elements; it then consumes the
// previous step's outputs.
struct StepSpec {
    WorkloadStep step;
    std::optional<ChainRule> chain;
};

struct WorkloadFile {
    int version = 1;
    std::vector<StepSpec> steps;
};

inline nlohmann::json to_json(const WorkloadStep& step)
{
    nlohmann::json j;
    j["elements"] = nlohmann::json::array();
    for (const InputElement& e : step.elements) {
        nlohmann::json je;
        je["id"] = e.id;
        je["size"] = e.size_words;
        je["map_cost"] = e.map_cost;
        je["emits"] = nlohmann::json::array();
        for (const EmittedPair& pr : e.emissions)
            je["emits"].push_back(
                {{"key", pr.key}, {"ksize", pr.key_size_words}, {"vsize", pr.value_size_words}});
        j["elements"].push_back(std::move(je));
    }
    j["reduce"] = {{"alpha", step.reduce.cost_alpha},
                   {"beta", step.reduce.cost_beta},
                   {"out_sizes", step.reduce.output_sizes}};
    if (!step.initial_placement.empty()) {
        nlohmann::json jp = nlohmann::json::object();
        for (const auto& [id, pe] : step.initial_placement) jp[std::to_string(id)] = pe;
        j["placement"] = std::move(jp);
    }
    return j;
}

inline WorkloadStep step_from_json(const nlohmann::json& j)
{
    WorkloadStep step;
    for (const auto& je : j.value("elements", nlohmann::json::array())) {
        InputElement e;
        e.id = je.at("id").get<ElementId>();
        e.size_words = je.at("size").get<Words>();
        e.map_cost = je.value("map_cost", WorkUnits{0});
        for (const auto& jp : je.value("emits", nlohmann::json::array())) {
            EmittedPair pr;
            pr.key = jp.at("key").get<KeyId>();
            pr.key_size_words = jp.value("ksize", Words{1});
            pr.value_size_words = jp.value("vsize", Words{0});
            e.emissions.push_back(pr);
        }
        step.elements.push_back(std::move(e));
    }
    if (j.contains("reduce")) {
        const auto& jr = j.at("reduce");
        step.reduce.cost_alpha = jr.value("alpha", WorkUnits{1});
        step.reduce.cost_beta = jr.value("beta", WorkUnits{0});
        if (jr.contains("out_sizes"))
            step.reduce.output_sizes = jr.at("out_sizes").get<std::vector<Words>>();
    }
    if (j.contains("placement"))
        for (const auto& [key, value] : j.at("placement").items())
            step.initial_placement[std::stoull(key)] = value.get<PeId>();
    return step;
}

inline void save_workload(const WorkloadFile& file, const std::string& path)
{
    nlohmann::json j;
    j["version"] = file.version;
    j["steps"] = nlohmann::json::array();
    for (const StepSpec& spec : file.steps) {
        nlohmann::json js = to_json(spec.step);
        if (spec.chain)
            js["chain"] = {{"alpha", spec.chain->cost_alpha},
                           {"beta", spec.chain->cost_beta},
                           {"rekey", spec.chain->rekey}};
        j["steps"].push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline WorkloadFile load_workload(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    WorkloadFile file;
    file.version = j.value("version", 1);
    if (!j.contains("steps") || !j.at("steps").is_array() || j.at("steps").empty())
        throw IoError(path + ": no steps");
    try {
        for (const auto& js : j.at("steps")) {
            StepSpec spec;
            spec.step = step_from_json(js);
            if (js.contains("chain")) {
                ChainRule rule;
                rule.cost_alpha = js.at("chain").value("alpha", WorkUnits{1});
                rule.cost_beta = js.at("chain").value("beta", WorkUnits{0});
                rule.rekey = js.at("chain").value("rekey", false);
                spec.chain = rule;
            }
            file.steps.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    for (std::size_t i = 0; i < file.steps.size(); ++i) {
        if (i > 0 && file.steps[i].step.elements.empty() && !file.steps[i].chain)
            throw IoError(path + ": step " + std::to_string(i) +
                          " has neither elements nor a chain rule");
        file.steps[i].step.validate();
    }
    return file;
}

}  // namespace mrsim
