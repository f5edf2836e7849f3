#include "pmsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "json.hpp"

namespace pmsim {

namespace {

using nlohmann::json;

void expect_keys(const json& object, const std::string& context,
                 std::initializer_list<const char*> allowed) {
    const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
    for (const auto& item : object.items()) {
        if (!allowed_set.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
}

double require_number(const json& object, const std::string& context, const char* key) {
    if (!object.contains(key))
        throw ConfigError("missing key '" + std::string(key) + "' in " + context);
    if (!object[key].is_number())
        throw ConfigError("key '" + std::string(key) + "' in " + context + " must be a number");
    return object[key].get<double>();
}

double number_or(const json& object, const std::string& context, const char* key,
                 double fallback) {
    if (!object.contains(key) || object[key].is_null()) return fallback;
    if (!object[key].is_number())
        throw ConfigError("key '" + std::string(key) + "' in " + context + " must be a number");
    return object[key].get<double>();
}

TraitSpec parse_trait(const json& object, const std::string& context) {
    if (!object.is_object())
        throw ConfigError(context + " must be an object with a 'dist' field");
    if (!object.contains("dist") || !object["dist"].is_string())
        throw ConfigError(context + " requires a string 'dist' field");
    const std::string dist = object["dist"].get<std::string>();
    if (dist == "constant") {
        expect_keys(object, context, {"dist", "value"});
        return TraitSpec::constant(require_number(object, context, "value"));
    }
    if (dist == "uniform") {
        expect_keys(object, context, {"dist", "low", "high"});
        return TraitSpec::uniform(require_number(object, context, "low"),
                                  require_number(object, context, "high"));
    }
    if (dist == "normal") {
        expect_keys(object, context, {"dist", "mean", "std"});
        return TraitSpec::normal(require_number(object, context, "mean"),
                                 require_number(object, context, "std"));
    }
    throw ConfigError(context + ": unknown dist '" + dist +
                      "' (expected constant, uniform, or normal)");
}

json trait_to_json(const TraitSpec& spec) {
    switch (spec.kind) {
        case TraitSpec::Kind::constant:
            return json{{"dist", "constant"}, {"value", spec.a}};
        case TraitSpec::Kind::uniform:
            return json{{"dist", "uniform"}, {"low", spec.a}, {"high", spec.b}};
        case TraitSpec::Kind::normal:
            return json{{"dist", "normal"}, {"mean", spec.a}, {"std", spec.b}};
    }
    return json();
}

SimConfig parse_simulation(const json& object) {
    if (!object.is_object()) throw ConfigError("'simulation' must be an object");
    expect_keys(object, "simulation",
                {"n_agents", "horizon", "initial_price", "sigma_eta", "election_variance",
                 "lambda", "master_seed", "max_order_volume", "resolution", "traits", "whale"});

    SimConfig config;
    config.n_agents = static_cast<int>(number_or(object, "simulation", "n_agents", 100));
    config.horizon = static_cast<int>(number_or(object, "simulation", "horizon", 100));
    config.initial_price = number_or(object, "simulation", "initial_price", 0.5);
    config.lambda = number_or(object, "simulation", "lambda", 0.05);
    config.master_seed =
        static_cast<std::uint64_t>(number_or(object, "simulation", "master_seed", 0));

    const bool has_sigma = object.contains("sigma_eta") && !object["sigma_eta"].is_null();
    const bool has_variance =
        object.contains("election_variance") && !object["election_variance"].is_null();
    if (has_sigma) config.sigma_eta = require_number(object, "simulation", "sigma_eta");
    if (has_variance) {
        const double variance = require_number(object, "simulation", "election_variance");
        if (variance < 0.0) throw ConfigError("simulation.election_variance must be >= 0");
        const double sigma = std::sqrt(variance);
        if (has_sigma && std::abs(sigma - config.sigma_eta) > 1e-12)
            throw ConfigError(
                "simulation.sigma_eta and simulation.election_variance disagree; specify one");
        config.sigma_eta = sigma;
    }
    if (!has_sigma && !has_variance) config.sigma_eta = 0.0;

    if (object.contains("max_order_volume") && !object["max_order_volume"].is_null())
        config.max_order_volume = require_number(object, "simulation", "max_order_volume");

    if (object.contains("resolution")) {
        if (!object["resolution"].is_string())
            throw ConfigError("simulation.resolution must be a string");
        const std::string mode = object["resolution"].get<std::string>();
        if (mode == "expected")
            config.resolution = ContractResolution::expected_value;
        else if (mode == "bernoulli")
            config.resolution = ContractResolution::bernoulli;
        else
            throw ConfigError("simulation.resolution must be 'expected' or 'bernoulli'");
    }

    if (object.contains("traits")) {
        const json& traits = object["traits"];
        if (!traits.is_object()) throw ConfigError("simulation.traits must be an object");
        expect_keys(traits, "simulation.traits",
                    {"budget", "valuation", "stubbornness", "expertise", "bias", "risk_aversion",
                     "herding"});
        if (traits.contains("budget"))
            config.traits.budget = parse_trait(traits["budget"], "simulation.traits.budget");
        if (traits.contains("valuation"))
            config.traits.valuation =
                parse_trait(traits["valuation"], "simulation.traits.valuation");
        if (traits.contains("stubbornness"))
            config.traits.stubbornness =
                parse_trait(traits["stubbornness"], "simulation.traits.stubbornness");
        if (traits.contains("expertise"))
            config.traits.expertise =
                parse_trait(traits["expertise"], "simulation.traits.expertise");
        if (traits.contains("bias"))
            config.traits.bias = parse_trait(traits["bias"], "simulation.traits.bias");
        if (traits.contains("risk_aversion"))
            config.traits.risk_aversion =
                parse_trait(traits["risk_aversion"], "simulation.traits.risk_aversion");
        if (traits.contains("herding"))
            config.traits.herding = parse_trait(traits["herding"], "simulation.traits.herding");
    }

    if (object.contains("whale") && !object["whale"].is_null()) {
        const json& whale = object["whale"];
        if (!whale.is_object()) throw ConfigError("simulation.whale must be an object or null");
        expect_keys(whale, "simulation.whale", {"rho", "valuation", "risk_aversion"});
        WhaleSpec spec;
        spec.budget_fraction = require_number(whale, "simulation.whale", "rho");
        spec.fixed_valuation = require_number(whale, "simulation.whale", "valuation");
        spec.risk_aversion = number_or(whale, "simulation.whale", "risk_aversion", 1.0);
        config.whale = spec;
    }
    return config;
}

Scenario parse_scenario(const json& root) {
    if (!root.is_object()) throw ConfigError("scenario root must be a JSON object");
    expect_keys(root, "scenario",
                {"experiment", "simulation", "sweep", "replications", "output_dir", "plots"});

    Scenario scenario;
    if (root.contains("experiment")) {
        if (!root["experiment"].is_string())
            throw ConfigError("'experiment' must be a string ('run' or 'sweep')");
        const std::string experiment = root["experiment"].get<std::string>();
        if (experiment == "run")
            scenario.experiment = Scenario::Experiment::single_run;
        else if (experiment == "sweep")
            scenario.experiment = Scenario::Experiment::sweep;
        else
            throw ConfigError("'experiment' must be 'run' or 'sweep', got '" + experiment + "'");
    }

    if (root.contains("simulation")) scenario.simulation = parse_simulation(root["simulation"]);

    if (root.contains("replications")) {
        if (!root["replications"].is_number_integer() || root["replications"].get<int>() < 1)
            throw ConfigError("'replications' must be a positive integer");
        scenario.replications = root["replications"].get<int>();
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string");
        scenario.output_dir = root["output_dir"].get<std::string>();
    }
    if (root.contains("plots")) {
        if (!root["plots"].is_boolean()) throw ConfigError("'plots' must be a boolean");
        scenario.plots = root["plots"].get<bool>();
    }

    if (scenario.experiment == Scenario::Experiment::sweep) {
        if (!root.contains("sweep"))
            throw ConfigError("experiment 'sweep' requires a 'sweep' object");
        const json& sweep = root["sweep"];
        if (!sweep.is_object()) throw ConfigError("'sweep' must be an object");
        expect_keys(sweep, "sweep", {"parameter", "values"});
        if (!sweep.contains("parameter") || !sweep["parameter"].is_string())
            throw ConfigError("sweep.parameter must be a string");
        SweepSpec spec;
        try {
            spec.parameter = sweep_parameter_from_string(sweep["parameter"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!sweep.contains("values") || !sweep["values"].is_array() || sweep["values"].empty())
            throw ConfigError("sweep.values must be a non-empty array of numbers");
        for (const json& v : sweep["values"]) {
            if (!v.is_number()) throw ConfigError("sweep.values must contain only numbers");
            spec.values.push_back(v.get<double>());
        }
        scenario.sweep = spec;
    } else if (root.contains("sweep")) {
        throw ConfigError("'sweep' given but experiment is 'run'");
    }

    try {
        validate(scenario.simulation);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return scenario;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_scenario(root);
}

Scenario scenario_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario text is not valid JSON: ") + e.what());
    }
    return parse_scenario(root);
}

std::string scenario_echo(const Scenario& scenario) {
    json root;
    root["experiment"] =
        scenario.experiment == Scenario::Experiment::single_run ? "run" : "sweep";
    root["replications"] = scenario.replications;
    root["output_dir"] = scenario.output_dir;
    root["plots"] = scenario.plots;

    json sim;
    const SimConfig& config = scenario.simulation;
    sim["n_agents"] = config.n_agents;
    sim["horizon"] = config.horizon;
    sim["initial_price"] = config.initial_price;
    sim["sigma_eta"] = config.sigma_eta;
    sim["election_variance"] = config.sigma_eta * config.sigma_eta;
    sim["lambda"] = config.lambda;
    sim["master_seed"] = config.master_seed;
    if (config.max_order_volume)
        sim["max_order_volume"] = *config.max_order_volume;
    else
        sim["max_order_volume"] = nullptr;
    sim["resolution"] =
        config.resolution == ContractResolution::expected_value ? "expected" : "bernoulli";
    json traits;
    traits["budget"] = trait_to_json(config.traits.budget);
    traits["valuation"] = trait_to_json(config.traits.valuation);
    traits["stubbornness"] = trait_to_json(config.traits.stubbornness);
    traits["expertise"] = trait_to_json(config.traits.expertise);
    traits["bias"] = trait_to_json(config.traits.bias);
    traits["risk_aversion"] = trait_to_json(config.traits.risk_aversion);
    traits["herding"] = trait_to_json(config.traits.herding);
    sim["traits"] = traits;
    if (config.whale) {
        sim["whale"] = json{{"rho", config.whale->budget_fraction},
                            {"valuation", config.whale->fixed_valuation},
                            {"risk_aversion", config.whale->risk_aversion}};
    } else {
        sim["whale"] = nullptr;
    }
    root["simulation"] = sim;

    if (scenario.sweep) {
        root["sweep"] = json{{"parameter", to_string(scenario.sweep->parameter)},
                             {"values", scenario.sweep->values}};
    }
    return root.dump(2) + "\n";
}

}  // namespace pmsim
