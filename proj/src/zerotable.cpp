// Zero-table text format:
//   # q=<q> label=<l> complete_to=<T>
//   <beta> <gamma>
//   ...
// gamma ascending, > 0 only, >= 15 significant digits on write.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "primevar/lfunctions.hpp"

namespace primevar::lfunctions {

ZeroTable ingest_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open zero table: " + path);
  ZeroTable table;
  std::string line;
  int lineno = 0;
  bool have_block = false;
  CharKey key{0, 0};
  ZeroTable::PerChar block;

  auto flush = [&]() {
    if (have_block) table.add_block(key, std::move(block));
    block = {};
    have_block = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      unsigned q = 0, label = 0;
      double complete = -1.0;
      if (std::sscanf(line.c_str(), "# q=%u label=%u complete_to=%lf", &q,
                      &label, &complete) != 3 ||
          q == 0 || complete < 0.0)
        throw ParseError("bad header at line " + std::to_string(lineno) +
                         ": " + line);
      flush();
      key = {q, label};
      block.height_complete = complete;
      have_block = true;
      continue;
    }
    if (!have_block)
      throw ParseError("data before header at line " + std::to_string(lineno));
    double beta = 0.0, gamma = 0.0;
    if (std::sscanf(line.c_str(), "%lf %lf", &beta, &gamma) != 2)
      throw ParseError("bad data at line " + std::to_string(lineno) + ": " +
                       line);
    if (!block.zeros.empty() && gamma <= block.zeros.back().gamma)
      throw SymmetryViolation("non-ascending gamma at line " +
                              std::to_string(lineno) + " (q=" +
                              std::to_string(key.first) + " label=" +
                              std::to_string(key.second) + ")");
    LZero z;
    z.q = key.first;
    z.label = key.second;
    z.beta = beta;
    z.gamma = gamma;
    z.source = beta == 0.5 ? ZeroSource::ingested : ZeroSource::synthetic;
    block.zeros.push_back(z);
  }
  flush();
  return table;
}

void write_zeros(const ZeroTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write zero table: " + path);
  char buf[96];
  for (const auto& [key, pc] : table.blocks()) {
    std::snprintf(buf, sizeof buf, "# q=%u label=%u complete_to=%.17g\n",
                  key.first, key.second, pc.height_complete);
    out << buf;
    for (const auto& z : pc.zeros) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", z.beta, z.gamma);
      out << buf;
    }
  }
}

std::vector<std::string> verify_table(const ZeroTable& table,
                                      double linf_tol) {
  std::vector<std::string> failures;
  for (const auto& [key, pc] : table.blocks()) {
    auto tag = "q=" + std::to_string(key.first) +
               " label=" + std::to_string(key.second);
    characters::DirichletCharacter chi;
    try {
      chi = characters::character_by_label(key.first, key.second);
    } catch (const std::exception& e) {
      failures.push_back(tag + ": " + e.what());
      continue;
    }
    // RVM certificate
    double T = pc.height_complete;
    if (T > 0.0) {
      double pred = rvm_predict(chi, T);
      double slack =
          2.0 + std::log(static_cast<double>(key.first) * (T + 2.0));
      int n = 0;
      for (const auto& z : pc.zeros)
        if (z.gamma <= T) ++n;
      if (std::fabs(n - pred) > slack)
        failures.push_back(tag + ": count " + std::to_string(n) +
                           " vs RVM " + std::to_string(pred));
    }
    // re-evaluate on-line zeros when the L-value backend covers them
    if (key.first <= 200) {
      for (const auto& z : pc.zeros) {
        if (z.gamma > 500.0) break;
        std::complex<double> v =
            l_value(chi, std::complex<double>(z.beta, z.gamma));
        if (std::abs(v) >= linf_tol) {
          failures.push_back(tag + ": |L(rho)| = " + std::to_string(std::abs(v)) +
                             " at gamma=" + std::to_string(z.gamma));
          break;
        }
      }
    }
  }
  return failures;
}

}  // namespace primevar::lfunctions
