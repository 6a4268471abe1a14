#include "gsfw/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gsfw {

namespace {

void append_common(std::ostringstream& out, const RunReport& r) {
  out.precision(12);
  out << r.k << ',' << r.iterations << ',' << r.infeas << ',' << r.sdp_value << ','
      << r.best_value << ',' << r.ar << ',' << r.memory_words << ',' << r.seed << ','
      << r.wall_ms << '\n';
}

}  // namespace

std::string reports_to_csv(const std::vector<RunReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("no reports to emit");
  const ProblemKind kind = reports.front().kind;
  for (const RunReport& r : reports)
    if (r.kind != kind) throw std::invalid_argument("mixed report kinds in one CSV");

  std::ostringstream out;
  if (kind == ProblemKind::MaxKCut) {
    out << "dataset,V,E,k,iterations,infeas,sdp_value,best_value,AR,memory_words,seed,wall_ms\n";
    for (const RunReport& r : reports) {
      out << r.dataset << ',' << r.n << ',' << r.e_plus << ',';
      append_common(out, r);
    }
  } else {
    out << "dataset,V,Eplus,Eminus,k,iterations,infeas,sdp_value,best_value,AR,memory_words,"
           "seed,wall_ms\n";
    for (const RunReport& r : reports) {
      out << r.dataset << ',' << r.n << ',' << r.e_plus << ',' << r.e_minus << ',';
      append_common(out, r);
    }
  }
  return out.str();
}

namespace {

nlohmann::json to_json_obj(const RunReport& r) {
  return nlohmann::json{{"dataset", r.dataset},
                        {"problem", r.kind == ProblemKind::MaxKCut ? "maxkcut" : "maxagree"},
                        {"V", r.n},
                        {"Eplus", r.e_plus},
                        {"Eminus", r.e_minus},
                        {"k", r.k},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"infeas", r.infeas},
                        {"sdp_value", r.sdp_value},
                        {"best_value", r.best_value},
                        {"mean_value", r.mean_value},
                        {"AR", r.ar},
                        {"memory_words", r.memory_words},
                        {"seed", r.seed},
                        {"wall_ms", r.wall_ms}};
}

RunReport from_json_obj(const nlohmann::json& j) {
  RunReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.kind = j.at("problem").get<std::string>() == "maxkcut" ? ProblemKind::MaxKCut
                                                           : ProblemKind::MaxAgree;
  r.n = j.at("V").get<int>();
  r.e_plus = j.at("Eplus").get<std::size_t>();
  r.e_minus = j.at("Eminus").get<std::size_t>();
  r.k = j.at("k").get<int>();
  r.iterations = j.at("iterations").get<long>();
  r.converged = j.at("converged").get<bool>();
  r.infeas = j.at("infeas").get<double>();
  r.sdp_value = j.at("sdp_value").get<double>();
  r.best_value = j.at("best_value").get<double>();
  r.mean_value = j.at("mean_value").get<double>();
  r.ar = j.at("AR").get<double>();
  r.memory_words = j.at("memory_words").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

}  // namespace

std::string report_to_json(const RunReport& r) { return to_json_obj(r).dump(2); }

std::string reports_to_json(const std::vector<RunReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RunReport& r : reports) arr.push_back(to_json_obj(r));
  return arr.dump(2);
}

RunReport report_from_json(const std::string& text) {
  return from_json_obj(nlohmann::json::parse(text));
}

std::vector<RunReport> reports_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  std::vector<RunReport> out;
  if (j.is_array())
    for (const auto& item : j) out.push_back(from_json_obj(item));
  else
    out.push_back(from_json_obj(j));
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, val);
  }
  return kv;
}

}  // namespace gsfw
