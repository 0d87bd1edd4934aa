#include "seeker/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seeker::harness {

Variant variant_from_string(const std::string& name) {
  if (name == "method") return Variant::Method;
  if (name == "random") return Variant::Random;
  if (name == "reinforce") return Variant::Reinforce;
  if (name == "entropy-only") return Variant::EntropyOnly;
  throw std::invalid_argument("unknown variant: " + name);
}

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::Method: return "method";
    case Variant::Random: return "random";
    case Variant::Reinforce: return "reinforce";
    case Variant::EntropyOnly: return "entropy-only";
  }
  return "method";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  return parts;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected unsigned integer, got '" +
                                value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config key '" + key + "': expected boolean, got '" + value + "'");
}

}  // namespace

AttributeSchema parse_schema_spec(const std::string& spec) {
  AttributeSchema schema;
  for (const std::string& entry : split(spec, ',')) {
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("schema entry needs name:count or name:a|b|c, got '" + entry +
                                  "'");
    const std::string name = trim(entry.substr(0, colon));
    const std::string rest = trim(entry.substr(colon + 1));
    schema.attributes.push_back(name);
    if (rest.find('|') != std::string::npos) {
      schema.values.push_back(split(rest, '|'));
    } else {
      const int count = parse_int("attributes", rest);
      std::vector<std::string> labels;
      for (int i = 0; i < count; ++i) labels.push_back(name + std::to_string(i));
      schema.values.push_back(std::move(labels));
    }
  }
  schema.validate();
  return schema;
}

std::string schema_spec_string(const AttributeSchema& schema) {
  std::string out;
  for (int a = 0; a < schema.num_attributes(); ++a) {
    if (a > 0) out += ",";
    out += schema.attributes[a] + ":";
    for (int v = 0; v < schema.num_values(a); ++v) {
      if (v > 0) out += "|";
      out += schema.values[a][v];
    }
  }
  return out;
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.train.game.schema = parse_schema_spec("color:3,shape:3,size:2");
  config.train.game.n_objects = 8;
  config.train.game.t_max = 5;
  config.train.run.t_max = 5;
  return config;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config = default_config();
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "game" && section != "train" && section != "eval" && section != "output")
        throw std::invalid_argument("unknown config section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "game") {
      if (key == "n_objects") config.train.game.n_objects = parse_int(key, value);
      else if (key == "attributes") config.train.game.schema = parse_schema_spec(value);
      else if (key == "t_max") {
        config.train.game.t_max = parse_int(key, value);
        config.train.run.t_max = config.train.game.t_max;
      } else if (key == "p_flip") config.train.game.p_flip = parse_double(key, value);
      else if (key == "r_success") config.train.game.r_success = parse_double(key, value);
      else if (key == "r_fail") config.train.game.r_fail = parse_double(key, value);
      else if (key == "question_penalty")
        config.train.game.question_penalty = parse_double(key, value);
      else throw std::invalid_argument("unknown [game] key: " + key);
    } else if (section == "train") {
      if (key == "variant") config.variant = variant_from_string(value);
      else if (key == "n_particles") config.train.run.n_particles = parse_int(key, value);
      else if (key == "gamma") config.train.run.gamma = parse_double(key, value);
      else if (key == "alpha") config.train.run.alpha = parse_double(key, value);
      else if (key == "beta") config.train.run.beta = parse_double(key, value);
      else if (key == "eta0") config.train.run.eta0 = parse_double(key, value);
      else if (key == "epochs") config.train.run.epochs = parse_int(key, value);
      else if (key == "episodes_per_epoch")
        config.train.run.episodes_per_epoch = parse_int(key, value);
      else if (key == "step_theta") config.train.run.step_theta = parse_double(key, value);
      else if (key == "step_omega") config.train.run.step_omega = parse_double(key, value);
      else if (key == "utility") config.train.run.utility_kind = utility_kind_from_string(value);
      else if (key == "prior_sigma") {
        config.train.run.prior_sigma = parse_double(key, value);
        config.train.prior.sigma = config.train.run.prior_sigma;
      } else if (key == "answer_samples") config.train.run.answer_samples = parse_int(key, value);
      else if (key == "seed") config.train.run.seed = parse_u64(key, value);
      else if (key == "kernel_bandwidth") {
        if (value == "median") config.train.kernel = svgd::KernelConfig::median();
        else config.train.kernel = svgd::KernelConfig::fixed(parse_double(key, value));
      } else if (key == "rollout_selection") {
        if (value == "sample") config.train.rollout_selection = rl::QuerySelection::Sample;
        else if (value == "gain") config.train.rollout_selection = rl::QuerySelection::Gain;
        else throw std::invalid_argument("rollout_selection must be sample or gain");
      } else if (key == "candidates_per_particle")
        config.train.candidates_per_particle = parse_int(key, value);
      else if (key == "baseline_decay") config.train.baseline_decay = parse_double(key, value);
      else if (key == "init_scale") config.train.init_scale = parse_double(key, value);
      else if (key == "adaptive_step") config.train.adaptive_step = parse_bool(key, value);
      else throw std::invalid_argument("unknown [train] key: " + key);
    } else if (section == "eval") {
      if (key == "episodes") config.eval_episodes = parse_int(key, value);
      else if (key == "selection") {
        if (value == "sample") config.eval_selection = rl::QuerySelection::Sample;
        else if (value == "gain") config.eval_selection = rl::QuerySelection::Gain;
        else if (value == "auto") config.eval_selection.reset();
        else throw std::invalid_argument("eval selection must be sample, gain or auto");
      } else throw std::invalid_argument("unknown [eval] key: " + key);
    } else if (section == "output") {
      if (key == "dir") config.out_dir = value;
      else throw std::invalid_argument("unknown [output] key: " + key);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": key outside of any section");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.train.run.seed = *overrides.seed;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.variant) config.variant = *overrides.variant;
  if (overrides.n_particles) config.train.run.n_particles = *overrides.n_particles;
  if (overrides.alpha) config.train.run.alpha = *overrides.alpha;
  if (overrides.beta) config.train.run.beta = *overrides.beta;
  if (overrides.eta0) config.train.run.eta0 = *overrides.eta0;
  if (overrides.utility) config.train.run.utility_kind = *overrides.utility;
}

rl::TrainOptions ExperimentConfig::resolved_train() const {
  rl::TrainOptions options = train;
  options.prior.sigma = train.run.prior_sigma;
  switch (variant) {
    case Variant::Method:
      break;
    case Variant::Random:
      options.run.n_particles = 1;
      options.run.epochs = 0;
      options.init_scale = 0.0;  // zero weights sample queries uniformly
      break;
    case Variant::Reinforce:
      // Plain single-policy REINFORCE: flat prior, no intrinsic reward, and
      // the 1/alpha likelihood scaling folded into the step size so the
      // effective learning rate matches the full method's.
      options.run.n_particles = 1;
      options.run.eta0 = 0.0;
      options.prior = rl::PriorSpec::flat();
      options.run.step_theta = train.run.step_theta / train.run.alpha;
      options.run.alpha = 1.0;
      break;
    case Variant::EntropyOnly:
      options.run.eta0 = 0.0;
      break;
  }
  return options;
}

rl::QuerySelection ExperimentConfig::resolved_eval_selection() const {
  if (eval_selection) return *eval_selection;
  switch (variant) {
    case Variant::Method:
    case Variant::EntropyOnly:
      return rl::QuerySelection::Gain;
    case Variant::Random:
    case Variant::Reinforce:
      return rl::QuerySelection::Sample;
  }
  return rl::QuerySelection::Gain;
}

std::string ExperimentConfig::canonical_text() const {
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[game]\n";
  out << "n_objects = " << train.game.n_objects << "\n";
  out << "attributes = " << schema_spec_string(train.game.schema) << "\n";
  out << "t_max = " << train.game.t_max << "\n";
  out << "p_flip = " << num(train.game.p_flip) << "\n";
  out << "r_success = " << num(train.game.r_success) << "\n";
  out << "r_fail = " << num(train.game.r_fail) << "\n";
  out << "question_penalty = " << num(train.game.question_penalty) << "\n";
  out << "[train]\n";
  out << "variant = " << to_string(variant) << "\n";
  out << "n_particles = " << train.run.n_particles << "\n";
  out << "gamma = " << num(train.run.gamma) << "\n";
  out << "alpha = " << num(train.run.alpha) << "\n";
  out << "beta = " << num(train.run.beta) << "\n";
  out << "eta0 = " << num(train.run.eta0) << "\n";
  out << "epochs = " << train.run.epochs << "\n";
  out << "episodes_per_epoch = " << train.run.episodes_per_epoch << "\n";
  out << "step_theta = " << num(train.run.step_theta) << "\n";
  out << "step_omega = " << num(train.run.step_omega) << "\n";
  out << "utility = " << to_string(train.run.utility_kind) << "\n";
  out << "prior_sigma = " << num(train.run.prior_sigma) << "\n";
  out << "answer_samples = " << train.run.answer_samples << "\n";
  out << "seed = " << train.run.seed << "\n";
  out << "kernel_bandwidth = "
      << (train.kernel.use_median ? std::string("median") : num(train.kernel.bandwidth)) << "\n";
  out << "rollout_selection = "
      << (train.rollout_selection == rl::QuerySelection::Gain ? "gain" : "sample") << "\n";
  out << "candidates_per_particle = " << train.candidates_per_particle << "\n";
  out << "baseline_decay = " << num(train.baseline_decay) << "\n";
  out << "init_scale = " << num(train.init_scale) << "\n";
  out << "adaptive_step = " << (train.adaptive_step ? "true" : "false") << "\n";
  out << "[eval]\n";
  out << "episodes = " << eval_episodes << "\n";
  out << "selection = "
      << (eval_selection ? (*eval_selection == rl::QuerySelection::Gain ? "gain" : "sample")
                         : "auto")
      << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
  // FNV-1a, 64 bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : canonical_text()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace seeker::harness
