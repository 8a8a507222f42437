// FCIDUMP import. Integrals are real, in chemist notation (pq|rs) over
// spatial orbitals, with each symmetry-unique value listed at least once;
// writers differ in which duplicates they emit, so every listed value is
// assigned to its whole 8-fold orbit and repeats must agree.

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "linenc/fermion.hpp"

namespace linenc {

namespace {

std::size_t header_int(const std::string& header, const std::string& key) {
  const std::regex re(key + R"(\s*=\s*(\d+))", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(header, m, re)) throw std::runtime_error("FCIDUMP header lacks " + key);
  return static_cast<std::size_t>(std::stoul(m[1].str()));
}

template <class Map, class Key>
void assign(Map& map, const Key& key, double value) {
  auto [it, inserted] = map.emplace(key, value);
  if (!inserted && std::abs(it->second - value) > 1e-10 * std::max(1.0, std::abs(value))) {
    throw std::runtime_error("FCIDUMP lists inconsistent values for symmetry-equivalent integrals");
  }
}

}  // namespace

FermionHamiltonian import_fcidump(const std::string& text) {
  auto up = text;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  const auto begin = up.find("&FCI");
  if (begin == std::string::npos) throw std::runtime_error("not an FCIDUMP file (no &FCI)");
  std::size_t end = up.find("&END", begin);
  std::size_t body = end == std::string::npos ? std::string::npos : end + 4;
  if (end == std::string::npos) {
    end = up.find('/', begin);
    body = end == std::string::npos ? std::string::npos : end + 1;
  }
  if (end == std::string::npos) throw std::runtime_error("FCIDUMP header is not terminated");
  const std::string header = up.substr(begin, end - begin);
  const std::size_t norb = header_int(header, "NORB");
  const std::size_t nelec = header_int(header, "NELEC");
  if (nelec > 2 * norb) throw std::runtime_error("FCIDUMP NELEC exceeds the spin-orbital count");

  std::map<std::array<std::size_t, 2>, double> h1;
  std::map<std::array<std::size_t, 4>, double> eri;
  double core = 0.0;

  std::istringstream in(text.substr(body));
  std::string line;
  std::size_t lineno = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(body), '\n'));
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), 'D', 'E');
    std::replace(line.begin(), line.end(), 'd', 'e');
    std::istringstream ls(line);
    double v = 0;
    long long i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error("FCIDUMP line " + std::to_string(lineno) + ": malformed record");
    }
    if (!(ls >> i >> j >> k >> l)) throw std::runtime_error("FCIDUMP line " + std::to_string(lineno) + ": expected four indices");
    for (auto idx : {i, j, k, l}) {
      if (idx < 0 || static_cast<std::size_t>(idx) > norb) {
        throw std::runtime_error("FCIDUMP line " + std::to_string(lineno) + ": orbital index out of range");
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      core += v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw std::runtime_error("FCIDUMP line " + std::to_string(lineno) + ": orbital energies are not supported");
      const std::size_t p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      assign(h1, std::array{p, q}, v);
      assign(h1, std::array{q, p}, v);
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) throw std::runtime_error("FCIDUMP line " + std::to_string(lineno) + ": bad two-electron record");
      const std::size_t p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      const std::size_t r = static_cast<std::size_t>(k - 1), s = static_cast<std::size_t>(l - 1);
      for (const auto& key : {std::array{p, q, r, s}, std::array{q, p, r, s}, std::array{p, q, s, r}, std::array{q, p, s, r},
                              std::array{r, s, p, q}, std::array{s, r, p, q}, std::array{r, s, q, p}, std::array{s, r, q, p}}) {
        assign(eri, key, v);
      }
    }
  }

  FermionHamiltonian h(2 * norb, nelec, core);
  auto so = [](std::size_t orb, std::size_t spin) { return 2 * orb + spin; };
  for (const auto& [key, v] : h1) {
    if (key[0] > key[1]) continue;
    for (std::size_t s = 0; s < 2; ++s) h.set_one_body(so(key[0], s), so(key[1], s), v);
  }
  // (1/2) sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}; each native key is
  // hit by exactly one (p,q,r,s,spin,spin) combination.
  std::map<std::array<std::size_t, 4>, double> two;
  for (const auto& [key, v] : eri) {
    const auto [p, q, r, s] = key;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const std::array<std::size_t, 4> native{so(p, a), so(r, b), so(s, b), so(q, a)};
        if (native[0] == native[1] || native[2] == native[3]) continue;
        two[native] += 0.5 * v;
      }
    }
  }
  for (const auto& [k, v] : two) {
    if (v != 0.0) h.set_two_body(k[0], k[1], k[2], k[3], v);
  }
  return h;
}

}  // namespace linenc
