#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace myopia {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment",
         {"model", "strategy", "horizon", "discount", "trials", "replications", "seed", "diagnostics",
          "diagnostics_replications", "node_budget", "word_count"}},
        {"param1", {"name", "lo", "hi", "count", "true"}},
        {"param2", {"name", "lo", "hi", "count", "true"}},
        {"design", {"name", "lo", "hi", "count"}},
    };
    return keys;
}

class Section {
public:
    Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
        const auto child = tree.get_child_optional(name_);
        if (!child) throw ConfigError("missing section [" + name_ + "]");
        node_ = &*child;
    }

    bool has(const std::string& key) const { return node_->get_child_optional(key).has_value(); }

    std::string text(const std::string& key) const {
        const auto v = node_->get_optional<std::string>(key);
        if (!v) throw ConfigError(field(key) + ": missing");
        if (v->empty()) throw ConfigError(field(key) + ": empty value");
        return *v;
    }

    double real(const std::string& key) const {
        const auto s = text(key);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size())
            throw ConfigError(field(key) + ": '" + s + "' is not a number");
        return v;
    }

    template <typename Int>
    Int integer(const std::string& key) const {
        const auto s = text(key);
        Int v{};
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size())
            throw ConfigError(field(key) + ": '" + s + "' is not an integer");
        return v;
    }

    bool flag(const std::string& key) const {
        const auto s = text(key);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError(field(key) + ": '" + s + "' is not a boolean");
    }

    std::string field(const std::string& key) const { return name_ + "." + key; }

private:
    std::string name_;
    const pt::ptree* node_ = nullptr;
};

AxisSpec read_axis(const Section& s) {
    AxisSpec axis{s.text("name"), s.real("lo"), s.real("hi"), 0};
    const auto count = s.integer<long long>("count");
    if (count < 2) throw ConfigError(s.field("count") + ": must be >= 2");
    axis.count = static_cast<std::size_t>(count);
    if (!(axis.lo < axis.hi)) throw ConfigError(s.field("lo") + ": must be < hi");
    axis.validate();
    return axis;
}

std::string fmt(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body)
            if (!it->second.contains(key)) throw ConfigError(section + "." + key + ": unknown key");
    }

    ExperimentConfig cfg;
    const Section exp(tree, "experiment");
    cfg.model.kind = parse_model_kind(exp.text("model"));
    if (exp.has("word_count")) {
        if (cfg.model.kind != ModelKind::MemoryRetention)
            throw ConfigError("experiment.word_count: only valid for the memory model");
        cfg.model.word_count = exp.integer<int>("word_count");
        if (cfg.model.word_count < 1) throw ConfigError("experiment.word_count: must be >= 1");
    }
    cfg.strategy = parse_strategy(exp.text("strategy"));
    cfg.horizon.steps = exp.integer<int>("horizon");
    cfg.horizon.discount = exp.has("discount") ? exp.real("discount") : 1.0;
    cfg.trials = exp.integer<int>("trials");
    cfg.replications = exp.integer<int>("replications");
    cfg.seed = exp.integer<std::uint64_t>("seed");
    cfg.diagnostics = exp.has("diagnostics") ? exp.flag("diagnostics") : false;
    cfg.diagnostics_replications =
        exp.has("diagnostics_replications") ? exp.integer<int>("diagnostics_replications") : 0;
    if (exp.has("node_budget")) cfg.node_budget = exp.real("node_budget");

    for (const char* name : {"param1", "param2"}) {
        const Section s(tree, name);
        cfg.parameter_axes.push_back(read_axis(s));
        cfg.true_params.push_back(s.real("true"));
    }
    cfg.design_axis = read_axis(Section(tree, "design"));

    if (cfg.trials < 1) throw ConfigError("experiment.trials: must be >= 1");
    if (cfg.replications < 1) throw ConfigError("experiment.replications: must be >= 1");
    if (cfg.horizon.steps < 1) throw ConfigError("experiment.horizon: must be >= 1");
    if (!(cfg.horizon.discount > 0.0 && cfg.horizon.discount <= 1.0))
        throw ConfigError("experiment.discount: must lie in (0, 1]");
    if (cfg.strategy == Strategy::Myopic && cfg.horizon.steps != 1)
        throw ConfigError("experiment.horizon: strategy 'myopic' requires horizon = 1");
    if (cfg.diagnostics && cfg.diagnostics_replications < 1)
        throw ConfigError("experiment.diagnostics_replications: must be >= 1 when diagnostics = true");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[experiment]\n"
        << "model = " << model_kind_name(cfg.model.kind) << "\n";
    if (cfg.model.kind == ModelKind::MemoryRetention) out << "word_count = " << cfg.model.word_count << "\n";
    out << "strategy = " << strategy_name(cfg.strategy) << "\n"
        << "horizon = " << cfg.horizon.steps << "\n"
        << "discount = " << fmt(cfg.horizon.discount) << "\n"
        << "trials = " << cfg.trials << "\n"
        << "replications = " << cfg.replications << "\n"
        << "seed = " << cfg.seed << "\n"
        << "diagnostics = " << (cfg.diagnostics ? "true" : "false") << "\n"
        << "diagnostics_replications = " << cfg.diagnostics_replications << "\n"
        << "node_budget = " << fmt(cfg.node_budget) << "\n";
    for (std::size_t k = 0; k < cfg.parameter_axes.size(); ++k) {
        const auto& a = cfg.parameter_axes[k];
        out << "\n[param" << k + 1 << "]\n"
            << "name = " << a.name << "\n"
            << "lo = " << fmt(a.lo) << "\n"
            << "hi = " << fmt(a.hi) << "\n"
            << "count = " << a.count << "\n"
            << "true = " << fmt(cfg.true_params[k]) << "\n";
    }
    out << "\n[design]\n"
        << "name = " << cfg.design_axis.name << "\n"
        << "lo = " << fmt(cfg.design_axis.lo) << "\n"
        << "hi = " << fmt(cfg.design_axis.hi) << "\n"
        << "count = " << cfg.design_axis.count << "\n";
    return out.str();
}

std::vector<std::string> preset_names() { return {"gap", "psychometric", "memory"}; }

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig cfg;
    cfg.strategy = Strategy::TStepAhead;
    cfg.horizon = HorizonSpec{2, 1.0};
    cfg.diagnostics = true;
    cfg.seed = 20210611;
    if (name == "gap") {
        cfg.model.kind = ModelKind::GapAcceptance;
        cfg.parameter_axes = {{"T_cr", 5.0, 10.0, 20}, {"sigma", 1.0, 5.0, 20}};
        cfg.true_params = {7.0, 2.004};
        cfg.design_axis = {"gap", 4.0, 12.0, 25};
        cfg.trials = 150;
        cfg.replications = 500;
        cfg.diagnostics_replications = 500;
    } else if (name == "psychometric") {
        // The threshold axis carries [0.7, 7] so that both true values lie inside the grid.
        cfg.model.kind = ModelKind::VisualPsychometric;
        cfg.parameter_axes = {{"b", 0.7, 7.0, 50}, {"s", 0.0, 10.0, 50}};
        cfg.true_params = {2.3643, 0.6312};
        cfg.design_axis = {"intensity", 0.0, 3.0, 50};
        cfg.trials = 200;
        cfg.replications = 200;
        cfg.diagnostics_replications = 200;
    } else if (name == "memory") {
        cfg.model.kind = ModelKind::MemoryRetention;
        cfg.model.word_count = 15;
        cfg.parameter_axes = {{"a", 0.0, 1.0, 20}, {"b", 0.0, 1.0, 20}};
        cfg.true_params = {0.7103, 0.0833};
        cfg.design_axis = {"lag", 0.0, 50.0, 50};
        cfg.trials = 80;
        cfg.replications = 200;
        cfg.diagnostics_replications = 200;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected gap, psychometric or memory)");
    }
    cfg.validate();
    return cfg;
}

}  // namespace myopia
