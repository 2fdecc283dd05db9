#include "folnd/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace folnd {

bool FiniteModel::holds(const std::string& pred, const std::vector<int>& tuple) const {
  auto it = interp.find(pred);
  return it != interp.end() && it->second.count(tuple) != 0;
}

Window make_window(const std::set<VarId>& vars) {
  return Window(vars.begin(), vars.end());
}

Window window_union(const Window& a, const Window& b) {
  std::set<VarId> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return make_window(s);
}

bool window_contains(const Window& w, VarId v) {
  return std::binary_search(w.begin(), w.end(), v);
}

int Assignment::value_of(VarId v) const {
  auto it = std::lower_bound(window.begin(), window.end(), v);
  if (it == window.end() || *it != v)
    throw std::runtime_error("variable v" + std::to_string(v.index) + " not in the window");
  return values[it - window.begin()];
}

Assignment override_at(const Assignment& a, VarId x, int b, int domain_size) {
  if (b < 0 || b >= domain_size) throw std::runtime_error("override value outside the domain");
  Assignment out = a;
  auto it = std::lower_bound(out.window.begin(), out.window.end(), x);
  if (it != out.window.end() && *it == x) {
    out.values[it - out.window.begin()] = b;
  } else {
    size_t pos = it - out.window.begin();
    out.window.insert(it, x);
    out.values.insert(out.values.begin() + pos, b);
  }
  return out;
}

FiniteModel model_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FiniteModel m;
  if (!j.is_object() || !j.contains("domain") || !j["domain"].is_number_integer())
    throw std::runtime_error("model: expected an object with an integer \"domain\"");
  m.domain_size = j["domain"].get<int>();
  if (m.domain_size < 1) throw std::runtime_error("model: domain must be at least 1");
  if (j.contains("predicates")) {
    for (auto& [name, pj] : j["predicates"].items()) {
      int arity = pj.at("arity").get<int>();
      if (arity < 1) throw std::runtime_error("model: arity of " + name + " must be at least 1");
      m.sig.declare(name, arity);
      std::set<std::vector<int>> tuples;
      for (auto& tj : pj.at("tuples")) {
        std::vector<int> t = tj.get<std::vector<int>>();
        if ((int)t.size() != arity)
          throw std::runtime_error("model: tuple of wrong length for " + name);
        for (int e : t)
          if (e < 0 || e >= m.domain_size)
            throw std::runtime_error("model: tuple element outside the domain in " + name);
        tuples.insert(std::move(t));
      }
      m.interp[name] = std::move(tuples);
    }
  }
  return m;
}

FiniteModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return model_from_json_text(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string model_to_json_text(const FiniteModel& m) {
  nlohmann::json j;
  j["domain"] = m.domain_size;
  j["predicates"] = nlohmann::json::object();
  for (const auto& [name, arity] : m.sig.predicates) {
    nlohmann::json pj;
    pj["arity"] = arity;
    pj["tuples"] = nlohmann::json::array();
    auto it = m.interp.find(name);
    if (it != m.interp.end())
      for (const auto& t : it->second) pj["tuples"].push_back(t);
    j["predicates"][name] = std::move(pj);
  }
  return j.dump(2) + "\n";
}

void save_model(const FiniteModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json_text(m);
}

}  // namespace folnd
