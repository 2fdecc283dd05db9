// Generates the demo corpus: the AxSelf-style formula, its expected
// simplification, the facts file, and 50 seeded random models on which the
// facts hold by construction.
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "folnd/model.hpp"
#include "folnd/testkit.hpp"

using namespace folnd;

namespace {

constexpr uint64_t kSeed = 7;

FiniteModel make_demo_model(Rng& rng) {
  FiniteModel m;
  m.domain_size = 2 + (int)rng.below(2);  // 2 or 3
  m.sig.declare("IOb", 1);
  m.sig.declare("Ether", 1);
  m.sig.declare("a", 2);
  m.sig.declare("b", 3);
  int n = m.domain_size;
  std::set<std::vector<int>> iob, ether, rel_a, rel_b;
  for (int i = 0; i < n; ++i) {
    if (rng.coin()) iob.insert({i});
    if (rng.coin()) ether.insert({i});
  }
  if (ether.empty()) ether.insert({(int)rng.below((uint64_t)n)});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rng.coin()) rel_a.insert({i, j});
  // b(k, e2, t) agrees across all ether e2: fixed by a hidden table over (k, t)
  std::vector<std::vector<bool>> b0(n, std::vector<bool>(n));
  for (int k = 0; k < n; ++k)
    for (int t = 0; t < n; ++t) b0[k][t] = rng.coin();
  for (int k = 0; k < n; ++k)
    for (int e2 = 0; e2 < n; ++e2)
      for (int t = 0; t < n; ++t) {
        bool in_ether = ether.count({e2}) != 0;
        bool val = in_ether ? b0[k][t] : rng.coin();
        if (val) rel_b.insert({k, e2, t});
      }
  m.interp["IOb"] = std::move(iob);
  m.interp["Ether"] = std::move(ether);
  m.interp["a"] = std::move(rel_a);
  m.interp["b"] = std::move(rel_b);
  return m;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir / "rand");

  write_file(dir / "axself.fol",
             "forall k in IOb(k). forall e in Ether(e). "
             "(a(k, e) -> forall t. forall e2 in Ether(e2). b(k, e2, t))\n");
  write_file(dir / "axself.simplified.fol",
             "forall k in IOb(k). forall e in Ether(e). "
             "(a(k, e) -> forall t. b(k, e, t))\n");
  write_file(dir / "axself.facts.json", R"json([
  {
    "formula": "b(k, e2, t)",
    "var": "e2",
    "theta": "IOb(k) & Ether(e2)",
    "status": "asserted",
    "models": []
  },
  {
    "kind": "valid",
    "formula": "exists e2. Ether(e2)",
    "status": "asserted",
    "models": []
  }
]
)json");

  Rng rng(kSeed);
  for (int i = 0; i < 50; ++i) {
    FiniteModel m = make_demo_model(rng);
    std::ostringstream name;
    name << "m" << std::setw(2) << std::setfill('0') << i << ".json";
    save_model(m, (dir / "rand" / name.str()).string());
  }
  std::cout << "wrote demo corpus to " << dir.string() << "\n";
  return 0;
}
