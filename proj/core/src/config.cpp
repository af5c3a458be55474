#include "mblbfgs/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {
namespace {

using nlohmann::json;

// Reads typed fields from one JSON object and rejects unknown keys.
class Section {
public:
  Section(const json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {
    if (!doc_.is_object()) throw ConfigError(name("") + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name(key) + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void ignore(const char* key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ConfigError(name(key) + ": unknown field");
    }
  }

  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

private:
  const json& doc_;
  std::string prefix_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

void parse_dataset(const json& doc, DatasetConfig& out, const std::filesystem::path& base) {
  Section s(doc, "dataset");
  std::string path;
  s.read("path", path);
  out.path = resolve(base, path);
  if (const json* label = s.child("label_column")) {
    if (label->is_string()) {
      out.label_column = label->get<std::string>();
    } else if (label->is_number_integer()) {
      out.label_column = label->get<long>();
    } else {
      throw ConfigError("dataset.label_column: expected a column name or index");
    }
  }
  std::string delimiter(1, out.delimiter);
  s.read("delimiter", delimiter);
  if (delimiter.size() != 1) throw ConfigError("dataset.delimiter: must be a single character");
  out.delimiter = delimiter[0];
  s.read("header", out.header);
  s.read("test_count", out.test_count);
  s.read("validation_fraction", out.validation_fraction);
  s.read("split_seed", out.split_seed);
  s.read("standardize", out.standardize);
  s.finish();
}

void parse_lbfgs(const json& doc, LbfgsSettings& out) {
  Section s(doc, "lbfgs");
  s.read("alpha", out.alpha);
  s.read("m0", out.m0);
  s.read("m_max", out.m_max);
  s.read("m_val", out.m_val);
  s.read("m_reset", out.m_reset);
  s.read("m_bar", out.m_bar);
  s.read("iterations", out.iterations);
  s.read("overlap", out.overlap);
  s.read("batch_size", out.batch_size);
  s.read("step_size", out.step_size);
  std::string curvature = out.curvature_batch == CurvatureBatch::full ? "full" : "overlap";
  s.read("curvature_batch", curvature);
  if (curvature == "full") {
    out.curvature_batch = CurvatureBatch::full;
  } else if (curvature == "overlap") {
    out.curvature_batch = CurvatureBatch::overlap;
  } else {
    throw ConfigError("lbfgs.curvature_batch: expected \"full\" or \"overlap\"");
  }
  s.finish();
}

void parse_adam(const json& doc, AdamSettings& out) {
  Section s(doc, "adam");
  s.read("iterations", out.iterations);
  s.read("batch_size", out.batch_size);
  s.read("step_size", out.step_size);
  s.read("beta1", out.beta1);
  s.read("beta2", out.beta2);
  s.read("epsilon", out.epsilon);
  s.finish();
}

}  // namespace

TrainingSettings ExperimentConfig::training_settings() const {
  TrainingSettings s;
  s.lbfgs = lbfgs;
  s.adam = adam;
  s.record.test_metrics = output.record_test_metrics;
  return s;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  Section root(doc, "");
  root.ignore("manifest");

  if (const json* d = root.child("dataset")) parse_dataset(*d, cfg.dataset, base_dir);
  if (const json* m = root.child("model")) {
    Section s(*m, "model");
    s.read("hidden", cfg.model.hidden);
    std::string act(to_string(cfg.model.activation));
    s.read("activation", act);
    try {
      cfg.model.activation = parse_activation(act);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("model.activation: ") + e.what());
    }
    s.finish();
  }
  if (const json* methods = root.child("methods")) {
    if (!methods->is_array()) throw ConfigError("methods: expected an array of method names");
    cfg.methods.clear();
    for (const auto& m : *methods) {
      if (!m.is_string()) throw ConfigError("methods: expected method names");
      try {
        cfg.methods.push_back(parse_method(m.get<std::string>()));
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("methods: ") + e.what());
      }
    }
  }
  if (const json* l = root.child("lbfgs")) parse_lbfgs(*l, cfg.lbfgs);
  if (const json* a = root.child("adam")) parse_adam(*a, cfg.adam);
  root.read("seed", cfg.seed);
  root.read("repetitions", cfg.repetitions);
  root.read("threads", cfg.threads);
  root.read("resplit_per_repetition", cfg.resplit_per_repetition);
  if (const json* o = root.child("output")) {
    Section s(*o, "output");
    std::string dir = cfg.output.directory.string();
    s.read("directory", dir);
    cfg.output.directory = resolve(base_dir, dir);
    s.read("trace_every", cfg.output.trace_every);
    s.read("traces", cfg.output.traces);
    s.read("record_test_metrics", cfg.output.record_test_metrics);
    s.finish();
  } else {
    cfg.output.directory = resolve(base_dir, cfg.output.directory);
  }
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

void validate(const ExperimentConfig& c) {
  if (c.dataset.test_count < 1) throw ConfigError("dataset.test_count: must be >= 1");
  if (!(c.dataset.validation_fraction >= 0.0 && c.dataset.validation_fraction < 1.0)) {
    throw ConfigError("dataset.validation_fraction: must be in [0, 1)");
  }
  if (c.model.hidden < 1) throw ConfigError("model.hidden: must be >= 1");
  if (c.methods.empty()) throw ConfigError("methods: at least one method is required");
  bool any_lbfgs = false;
  bool any_adaptive = false;
  for (Method m : c.methods) {
    any_lbfgs = any_lbfgs || is_lbfgs(m);
    any_adaptive = any_adaptive || is_adaptive(m);
  }
  if (any_lbfgs) {
    const auto& l = c.lbfgs;
    if (!(l.overlap > 0.0 && l.overlap < 0.5)) throw ConfigError("lbfgs.overlap: must be in (0, 0.5)");
    if (l.m0 < 1) throw ConfigError("lbfgs.m0: must be >= 1");
    if (l.m_max < l.m0) throw ConfigError("lbfgs.m_max: must be >= lbfgs.m0");
    if (l.m_bar < 1) throw ConfigError("lbfgs.m_bar: must be >= 1");
    if (l.m_val < 2) throw ConfigError("lbfgs.m_val: must be >= 2");
    if (l.m_reset < 0) throw ConfigError("lbfgs.m_reset: must be >= 0");
    if (!(l.alpha > 1.0)) throw ConfigError("lbfgs.alpha: must be > 1");
    if (l.batch_size < 1) throw ConfigError("lbfgs.batch_size: must be >= 1");
    if (!(l.step_size > 0.0)) throw ConfigError("lbfgs.step_size: must be > 0");
  }
  if (any_adaptive && c.dataset.validation_fraction <= 0.0) {
    throw ConfigError("dataset.validation_fraction: adaptive-memory methods need a validation set");
  }
  const auto& a = c.adam;
  if (a.batch_size < 1) throw ConfigError("adam.batch_size: must be >= 1");
  if (!(a.step_size > 0.0)) throw ConfigError("adam.step_size: must be > 0");
  if (!(a.beta1 >= 0.0 && a.beta1 < 1.0)) throw ConfigError("adam.beta1: must be in [0, 1)");
  if (!(a.beta2 >= 0.0 && a.beta2 < 1.0)) throw ConfigError("adam.beta2: must be in [0, 1)");
  if (!(a.epsilon > 0.0)) throw ConfigError("adam.epsilon: must be > 0");
  if (c.repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (c.threads < 1) throw ConfigError("threads: must be >= 1");
  if (c.output.trace_every < 1) throw ConfigError("output.trace_every: must be >= 1");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json label;
  if (const auto* name = std::get_if<std::string>(&c.dataset.label_column)) {
    label = *name;
  } else {
    label = std::get<long>(c.dataset.label_column);
  }
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));

  return json{
      {"dataset",
       {{"path", c.dataset.path.string()},
        {"label_column", label},
        {"delimiter", std::string(1, c.dataset.delimiter)},
        {"header", c.dataset.header},
        {"test_count", c.dataset.test_count},
        {"validation_fraction", c.dataset.validation_fraction},
        {"split_seed", c.dataset.split_seed},
        {"standardize", c.dataset.standardize}}},
      {"model", {{"hidden", c.model.hidden}, {"activation", std::string(to_string(c.model.activation))}}},
      {"methods", methods},
      {"lbfgs",
       {{"alpha", c.lbfgs.alpha},
        {"m0", c.lbfgs.m0},
        {"m_max", c.lbfgs.m_max},
        {"m_val", c.lbfgs.m_val},
        {"m_reset", c.lbfgs.m_reset},
        {"m_bar", c.lbfgs.m_bar},
        {"iterations", c.lbfgs.iterations},
        {"overlap", c.lbfgs.overlap},
        {"batch_size", c.lbfgs.batch_size},
        {"step_size", c.lbfgs.step_size},
        {"curvature_batch", c.lbfgs.curvature_batch == CurvatureBatch::full ? "full" : "overlap"}}},
      {"adam",
       {{"iterations", c.adam.iterations},
        {"batch_size", c.adam.batch_size},
        {"step_size", c.adam.step_size},
        {"beta1", c.adam.beta1},
        {"beta2", c.adam.beta2},
        {"epsilon", c.adam.epsilon}}},
      {"seed", c.seed},
      {"repetitions", c.repetitions},
      {"threads", c.threads},
      {"resplit_per_repetition", c.resplit_per_repetition},
      {"output",
       {{"directory", c.output.directory.string()},
        {"trace_every", c.output.trace_every},
        {"traces", c.output.traces},
        {"record_test_metrics", c.output.record_test_metrics}}},
  };
}

}  // namespace mblbfgs
