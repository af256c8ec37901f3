#include "hamexp/config.hpp"

#include <fstream>
#include <sstream>

#include "hamexp/error.hpp"

namespace hamexp {

void PipelineConfig::validate() {
  if (ell < 3) ell = 3;
  if (ell % 2 == 0) ++ell;
  if (absorber_ell < 3) absorber_ell = 3;
  if (absorber_ell % 2 == 0) ++absorber_ell;
  if (p_reservoir < 0 || p_reservoir > 1)
    throw InputError("config: p_reservoir must be in [0, 1]");
  if (regime_epsilon < 0 || regime_epsilon > 1)
    throw InputError("config: regime_epsilon must be in [0, 1]");
  for (int budget : {retry_connector, retry_absorber, retry_reservoir})
    if (budget < 1) throw InputError("config: retry budgets must be >= 1");
  if (copies_r < 1) throw InputError("config: copies_r must be >= 1");
  if (threads < 1) threads = 1;
  if (bipartite_m0 < 1) throw InputError("config: bipartite_m0 must be >= 1");
  if (template_regularity < 1 || template_regularity % 2 == 0)
    throw InputError("config: template_regularity must be odd and >= 1");
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  PipelineConfig cfg;
  cfg.apply(kv);
  cfg.validate();
  return cfg;
}

void PipelineConfig::apply(const std::map<std::string, std::string>& kv) {
  auto geti = [&](const char* k, int& slot) {
    auto it = kv.find(k);
    if (it != kv.end()) slot = std::stoi(it->second);
  };
  auto getll = [&](const char* k, long long& slot) {
    auto it = kv.find(k);
    if (it != kv.end()) slot = std::stoll(it->second);
  };
  auto getd = [&](const char* k, double& slot) {
    auto it = kv.find(k);
    if (it != kv.end()) slot = std::stod(it->second);
  };
  auto getb = [&](const char* k, bool& slot) {
    auto it = kv.find(k);
    if (it != kv.end()) slot = (it->second == "1" || it->second == "true" || it->second == "on");
  };
  geti("ell", ell);
  geti("absorber_ell", absorber_ell);
  getd("p_reservoir", p_reservoir);
  geti("bipartite_m0", bipartite_m0);
  getd("alpha_target", alpha_target);
  geti("last_step_threshold", last_step_threshold);
  geti("copies_r", copies_r);
  geti("retry_connector", retry_connector);
  geti("retry_absorber", retry_absorber);
  geti("retry_reservoir", retry_reservoir);
  getd("regime_epsilon", regime_epsilon);
  getd("tol_tv", tol_tv);
  getd("tol_spectral", tol_spectral);
  {
    auto it = kv.find("master_seed");
    if (it != kv.end()) master_seed = std::stoull(it->second);
  }
  geti("threads", threads);
  geti("tiny_n", tiny_n);
  geti("backtrack_n", backtrack_n);
  getll("backtrack_budget", backtrack_budget);
  getb("extension_fallback", extension_fallback);
  getb("force_faithful", force_faithful);
  geti("forest_parts", forest_parts);
  geti("reservoir_ell", reservoir_ell);
  geti("rounds_max", rounds_max);
  getd("chunk_load", chunk_load);
  getd("wall_clock_cap_s", wall_clock_cap_s);
  geti("template_regularity", template_regularity);
}

std::map<std::string, std::string> PipelineConfig::to_map() const {
  std::map<std::string, std::string> kv;
  auto put = [&](const char* k, auto v) {
    std::ostringstream os;
    os << v;
    kv[k] = os.str();
  };
  put("ell", ell);
  put("absorber_ell", absorber_ell);
  put("p_reservoir", p_reservoir);
  put("bipartite_m0", bipartite_m0);
  put("alpha_target", alpha_target);
  put("last_step_threshold", last_step_threshold);
  put("copies_r", copies_r);
  put("retry_connector", retry_connector);
  put("retry_absorber", retry_absorber);
  put("retry_reservoir", retry_reservoir);
  put("regime_epsilon", regime_epsilon);
  put("tol_tv", tol_tv);
  put("tol_spectral", tol_spectral);
  put("master_seed", master_seed);
  put("threads", threads);
  put("tiny_n", tiny_n);
  put("backtrack_n", backtrack_n);
  put("backtrack_budget", backtrack_budget);
  put("extension_fallback", extension_fallback ? 1 : 0);
  put("force_faithful", force_faithful ? 1 : 0);
  put("forest_parts", forest_parts);
  put("reservoir_ell", reservoir_ell);
  put("rounds_max", rounds_max);
  put("chunk_load", chunk_load);
  put("wall_clock_cap_s", wall_clock_cap_s);
  put("template_regularity", template_regularity);
  return kv;
}

}  // namespace hamexp
