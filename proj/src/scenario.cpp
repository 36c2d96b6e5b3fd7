#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtdt/power.hpp"

namespace qtdt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& value, const std::string& path, int line,
                    const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line, "bad numeric value for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& path, int line,
                        const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line, "bad integer value for " + key + ": '" + value + "'");
  }
}

TraitKind parse_kind(const std::string& value, const std::string& path, int line) {
  if (value == "normal") return TraitKind::Normal;
  if (value == "chi_square") return TraitKind::ChiSquareShift;
  if (value == "poisson") return TraitKind::PoissonShift;
  if (value == "binary") return TraitKind::BinaryThreshold;
  parse_fail(path, line,
             "unknown trait kind '" + value + "' (normal|chi_square|poisson|binary)");
}

MissingType parse_mtype(const std::string& value, const std::string& path, int line) {
  if (value == "t1") return MissingType::T1;
  if (value == "t2_1") return MissingType::T2_1;
  if (value == "t2_3") return MissingType::T2_3;
  if (value == "t2_4") return MissingType::T2_4;
  parse_fail(path, line, "unknown missing type '" + value + "' (t1|t2_1|t2_3|t2_4)");
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);

  Scenario scenario;
  scenario.traits.clear();
  bool saw_mtype = false;
  bool saw_grid = false;

  const auto trait_at = [&](std::size_t index) -> TraitConfig& {
    if (index >= 2) throw std::runtime_error("at most two traits are supported");
    if (scenario.traits.size() <= index) scenario.traits.resize(index + 1);
    return scenario.traits[index];
  };

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(path, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) parse_fail(path, line_no, "expected key = value");

    if (key == "d") scenario.d = parse_double(value, path, line_no, key);
    else if (key == "m") scenario.m = parse_double(value, path, line_no, key);
    else if (key == "theta") scenario.theta = parse_double(value, path, line_no, key);
    else if (key == "delta_star") {
      scenario.delta_star_grid.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        scenario.delta_star_grid.push_back(parse_double(trim(item), path, line_no, key));
      if (scenario.delta_star_grid.empty()) parse_fail(path, line_no, "empty delta_star list");
      saw_grid = true;
    } else if (key == "n_families")
      scenario.n_families = static_cast<std::size_t>(parse_u64(value, path, line_no, key));
    else if (key == "replications")
      scenario.replications = static_cast<std::size_t>(parse_u64(value, path, line_no, key));
    else if (key == "alpha") scenario.alpha = parse_double(value, path, line_no, key);
    else if (key == "seed") scenario.master_seed = parse_u64(value, path, line_no, key);
    else if (key == "threads")
      scenario.threads = static_cast<int>(parse_u64(value, path, line_no, key));
    else if (key == "centering") {
      if (value == "mean") scenario.centering = Centering::Mean;
      else if (value == "median") scenario.centering = Centering::Median;
      else parse_fail(path, line_no, "centering must be mean or median");
    } else if (key == "mtype") {
      scenario.mtype = parse_mtype(value, path, line_no);
      saw_mtype = true;
    } else if (key == "deletion") {
      if (value == "family") scenario.deletion = DeletionScope::Family;
      else if (value == "offspring") scenario.deletion = DeletionScope::Offspring;
      else parse_fail(path, line_no, "deletion must be family or offspring");
    } else if (key == "miss_p")
      scenario.miss_p = parse_double(value, path, line_no, key);
    else if (key == "strategy") {
      if (value == "auto") scenario.fixed_strategy.reset();
      else if (value == "use_same") scenario.fixed_strategy = Strategy::UseSame;
      else if (value == "use_other") scenario.fixed_strategy = Strategy::UseOther;
      else if (value == "use_both") scenario.fixed_strategy = Strategy::UseBoth;
      else parse_fail(path, line_no, "strategy must be auto|use_same|use_other|use_both");
    } else if (key == "rho1")
      scenario.rho.cross_trait = parse_double(value, path, line_no, key);
    else if (key == "rho2")
      scenario.rho.cross_sib = parse_double(value, path, line_no, key);
    else if (key.rfind("trait1.", 0) == 0 || key.rfind("trait2.", 0) == 0) {
      const std::size_t index = key[5] == '1' ? 0 : 1;
      const std::string field = key.substr(7);
      TraitConfig& trait = trait_at(index);
      if (field == "kind") trait.kind = parse_kind(value, path, line_no);
      else if (field == "alpha") trait.alpha = parse_double(value, path, line_no, key);
      else if (field == "beta") trait.beta = parse_double(value, path, line_no, key);
      else if (field == "p_star") trait.p_star = parse_double(value, path, line_no, key);
      else if (field == "sigma") trait.sigma = parse_double(value, path, line_no, key);
      else if (field == "c") trait.threshold = parse_double(value, path, line_no, key);
      else parse_fail(path, line_no, "unknown trait field '" + field + "'");
    } else
      parse_fail(path, line_no, "unknown key '" + key + "'");
  }

  if (scenario.traits.empty()) throw std::runtime_error(path + ": no traits configured");
  if (!saw_mtype)
    scenario.mtype = scenario.traits.size() == 1 ? MissingType::T1 : MissingType::T2_1;
  if (!saw_grid) scenario.delta_star_grid = {0.0, 0.33, 0.67, 1.0};
  scenario.validate();
  return scenario;
}

}  // namespace qtdt
