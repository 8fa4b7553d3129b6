#include "syslab/curves.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace syslab {
namespace {

// Cuff words in the standard generators.  Everything else in the catalog is
// a connector running through two pairs of pants.
constexpr const char* kCuffWords[] = {"a1", "a2", "A2 A1"};

constexpr const char* kCatalogText =
    "# Six-curve necklace catalog: three cuffs and three connectors whose\n"
    "# crossings form a single 6-cycle.  Upper case inverts a generator.\n"
    "[CURVES]\n"
    "c1 = a1\n"
    "c2 = a1 b1 A2 B2\n"
    "c3 = a2\n"
    "c4 = a2 b2\n"
    "c5 = A2 A1\n"
    "c6 = a1 b1\n"
    "\n"
    "[INTERSECT]\n"
    "c1 c2\n"
    "c2 c3\n"
    "c3 c4\n"
    "c4 c5\n"
    "c5 c6\n"
    "c6 c1\n"
    "\n"
    "[ROTATION]\n"
    "c1 c2: c1+ c2+ c1- c2-\n"
    "c2 c3: c2+ c3+ c2- c3-\n"
    "c3 c4: c3+ c4+ c3- c4-\n"
    "c4 c5: c4+ c5+ c4- c5-\n"
    "c5 c6: c5+ c6- c5- c6+\n"
    "c6 c1: c6+ c1- c6- c1+\n";

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw CatalogFormatError("catalog line " + std::to_string(line_no) + ": " +
                           msg);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool is_generator_letter(const std::string& t) {
  static const char* letters[] = {"a1", "A1", "b1", "B1",
                                  "a2", "A2", "b2", "B2"};
  return std::find(std::begin(letters), std::end(letters), t) !=
         std::end(letters);
}

bool cancels(const std::string& x, const std::string& y) {
  return x.size() == 2 && y.size() == 2 && x[1] == y[1] &&
         x[0] != y[0] && std::toupper(x[0]) == std::toupper(y[0]);
}

// A word is cyclically reduced when no adjacent pair, wrap-around included,
// is a letter next to its own inverse.
void check_cyclically_reduced(const std::vector<std::string>& w, int line_no) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string& x = w[i];
    const std::string& y = w[(i + 1) % w.size()];
    if (w.size() > 1 && cancels(x, y))
      fail(line_no, "word is not cyclically reduced near '" + x + " " + y +
                        "'");
    if (w.size() == 1 && cancels(x, x)) fail(line_no, "degenerate word");
  }
}

struct StrandToken {
  std::string id;
  bool forward;
};

StrandToken parse_strand(const std::string& t, int line_no) {
  if (t.size() < 2 || (t.back() != '+' && t.back() != '-'))
    fail(line_no, "strand end '" + t + "' must be an id followed by + or -");
  return {t.substr(0, t.size() - 1), t.back() == '+'};
}

}  // namespace

int CurveSystem::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (curves[i].id == id) return static_cast<int>(i);
  throw CatalogFormatError("unknown curve id '" + std::string(id) + "'");
}

CurveSystem parse_catalog(std::string_view text) {
  CurveSystem sys;
  enum Section { kNone, kCurves, kIntersect, kRotation };
  Section section = kNone;
  std::vector<std::pair<int, int>> pairs;     // INTERSECT order
  std::vector<bool> pair_has_rotation;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = raw;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    line = line.substr(first, line.find_last_not_of(" \t") - first + 1);

    if (line.front() == '[') {
      // Sections must appear once each, in fixed order.
      if (line == "[CURVES]" && section == kNone) {
        section = kCurves;
      } else if (line == "[INTERSECT]" && section == kCurves) {
        section = kIntersect;
        const int n = static_cast<int>(sys.curves.size());
        if (n == 0) fail(line_no, "no curves declared");
        sys.intersections = Eigen::MatrixXi::Zero(n, n);
      } else if (line == "[ROTATION]" && section == kIntersect) {
        section = kRotation;
      } else {
        fail(line_no, "unexpected section header '" + line + "'");
      }
      continue;
    }

    switch (section) {
      case kNone:
        fail(line_no, "content before [CURVES]");
      case kCurves: {
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'id = word'");
        const auto id_toks = tokens_of(line.substr(0, eq));
        if (id_toks.size() != 1) fail(line_no, "expected a single curve id");
        const std::string& id = id_toks[0];
        for (const CurveClass& c : sys.curves)
          if (c.id == id) fail(line_no, "duplicate curve id '" + id + "'");
        const auto word = tokens_of(line.substr(eq + 1));
        if (word.empty()) fail(line_no, "empty word");
        for (const std::string& t : word)
          if (!is_generator_letter(t))
            fail(line_no, "unknown generator '" + t + "'");
        check_cyclically_reduced(word, line_no);
        std::string joined;
        for (const std::string& t : word) {
          if (!joined.empty()) joined += ' ';
          joined += t;
        }
        const bool cuff = std::find(std::begin(kCuffWords),
                                    std::end(kCuffWords),
                                    joined) != std::end(kCuffWords);
        sys.curves.push_back({id, joined, cuff});
        break;
      }
      case kIntersect: {
        const auto toks = tokens_of(line);
        if (toks.size() != 2) fail(line_no, "expected 'id id'");
        const int i = sys.index_of(toks[0]);
        const int j = sys.index_of(toks[1]);
        if (i == j) fail(line_no, "curve cannot cross itself");
        if (sys.intersections(i, j) != 0)
          fail(line_no, "duplicate crossing pair");
        sys.intersections(i, j) = sys.intersections(j, i) = 1;
        pairs.emplace_back(i, j);
        break;
      }
      case kRotation: {
        const auto colon = line.find(':');
        if (colon == std::string::npos)
          fail(line_no, "expected 'id id: four strand ends'");
        const auto head = tokens_of(line.substr(0, colon));
        if (head.size() != 2) fail(line_no, "expected two curve ids");
        const int i = sys.index_of(head[0]);
        const int j = sys.index_of(head[1]);
        auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(i, j));
        if (it == pairs.end())
          it = std::find(pairs.begin(), pairs.end(), std::make_pair(j, i));
        if (it == pairs.end())
          fail(line_no, "rotation for a pair not listed in [INTERSECT]");
        const auto k = static_cast<std::size_t>(it - pairs.begin());
        if (pair_has_rotation.size() < pairs.size())
          pair_has_rotation.resize(pairs.size(), false);
        if (pair_has_rotation[k]) fail(line_no, "duplicate rotation line");
        pair_has_rotation[k] = true;

        const auto toks = tokens_of(line.substr(colon + 1));
        if (toks.size() != 4) fail(line_no, "expected four strand ends");
        Crossing x;
        x.a = i;
        x.b = j;
        // The four ends must be exactly i+, i-, j+, j- in some ccw order.
        int seen_fwd_i = 0, seen_bwd_i = 0, seen_fwd_j = 0, seen_bwd_j = 0;
        for (int s = 0; s < 4; ++s) {
          const StrandToken st = parse_strand(toks[s], line_no);
          const int c = sys.index_of(st.id);
          if (c != i && c != j)
            fail(line_no, "strand end names a curve not at this crossing");
          (c == i ? (st.forward ? seen_fwd_i : seen_bwd_i)
                  : (st.forward ? seen_fwd_j : seen_bwd_j))++;
          x.ccw[s] = {c, st.forward};
        }
        if (seen_fwd_i != 1 || seen_bwd_i != 1 || seen_fwd_j != 1 ||
            seen_bwd_j != 1)
          fail(line_no, "each strand end must appear exactly once");
        sys.crossings.push_back(x);
        break;
      }
    }
  }

  if (section != kRotation) fail(line_no, "missing section");
  if (sys.crossings.size() != pairs.size())
    fail(line_no, "every crossing pair needs a rotation line");

  // The face tracer identifies the order of crossings along a curve with
  // the catalog order, which is only canonical up to two crossings.
  std::vector<int> per_curve(sys.curves.size(), 0);
  for (const Crossing& x : sys.crossings) {
    ++per_curve[x.a];
    ++per_curve[x.b];
  }
  for (std::size_t c = 0; c < per_curve.size(); ++c)
    if (per_curve[c] > 2)
      throw CatalogFormatError("curve '" + sys.curves[c].id +
                               "' has more than two crossings; the order "
                               "along the curve would be ambiguous");
  return sys;
}

const char* builtin_catalog_text() { return kCatalogText; }

const CurveSystem& builtin_catalog() {
  static const CurveSystem sys = parse_catalog(kCatalogText);
  return sys;
}

namespace {

// Ribbon graph of the subsystem induced on `subset`: vertices are the kept
// crossings, arcs join consecutive kept crossings along each curve.  Darts
// are indexed 2*arc (tail to head) and 2*arc+1 (head to tail).
struct Ribbon {
  struct End {
    int vertex;  // index into kept crossings
    int slot;    // 0..3, position in the stored ccw cycle
  };
  std::vector<int> kept;                       // crossing indices
  std::vector<std::array<End, 2>> arcs;        // [tail, head]
  std::vector<std::array<int, 4>> leaving;     // dart leaving (vertex, slot)
  int curves_with_arcs = 0;

  int dart_count() const { return 2 * static_cast<int>(arcs.size()); }

  End arrival(int dart) const {
    const auto& a = arcs[dart / 2];
    return (dart % 2 == 0) ? a[1] : a[0];
  }
};

int slot_of(const Crossing& x, int curve, bool forward) {
  for (int s = 0; s < 4; ++s)
    if (x.ccw[s].curve == curve && x.ccw[s].forward == forward) return s;
  return -1;  // unreachable for a validated catalog
}

Ribbon build_ribbon(const CurveSystem& sys, const std::vector<int>& subset) {
  Ribbon rb;
  std::vector<char> in_subset(sys.curves.size(), 0);
  for (int c : subset) in_subset[c] = 1;

  std::vector<int> vertex_of(sys.crossings.size(), -1);
  for (std::size_t k = 0; k < sys.crossings.size(); ++k) {
    const Crossing& x = sys.crossings[k];
    if (in_subset[x.a] && in_subset[x.b]) {
      vertex_of[k] = static_cast<int>(rb.kept.size());
      rb.kept.push_back(static_cast<int>(k));
    }
  }

  rb.leaving.assign(rb.kept.size(), {-1, -1, -1, -1});
  for (int c : subset) {
    std::vector<int> along;  // kept crossings met by curve c, catalog order
    for (int v = 0; v < static_cast<int>(rb.kept.size()); ++v) {
      const Crossing& x = sys.crossings[rb.kept[v]];
      if (x.a == c || x.b == c) along.push_back(v);
    }
    if (along.empty()) continue;
    ++rb.curves_with_arcs;
    const int m = static_cast<int>(along.size());
    for (int i = 0; i < m; ++i) {
      const int u = along[i];
      const int v = along[(i + 1) % m];
      Ribbon::End tail{u, slot_of(sys.crossings[rb.kept[u]], c, true)};
      Ribbon::End head{v, slot_of(sys.crossings[rb.kept[v]], c, false)};
      const int arc = static_cast<int>(rb.arcs.size());
      rb.arcs.push_back({tail, head});
      rb.leaving[tail.vertex][tail.slot] = 2 * arc;
      rb.leaving[head.vertex][head.slot] = 2 * arc + 1;
    }
  }
  return rb;
}

// Count orbits of the face permutation: follow a dart to its arrival slot,
// then leave through the next slot counterclockwise.
int count_faces(const Ribbon& rb) {
  const int n = rb.dart_count();
  std::vector<char> seen(n, 0);
  int faces = 0;
  for (int d0 = 0; d0 < n; ++d0) {
    if (seen[d0]) continue;
    ++faces;
    int d = d0;
    do {
      seen[d] = 1;
      const Ribbon::End e = rb.arrival(d);
      d = rb.leaving[e.vertex][(e.slot + 1) % 4];
    } while (d != d0);
  }
  return faces;
}

bool connected_by_crossings(const CurveSystem& sys,
                            const std::vector<int>& subset) {
  if (subset.empty()) return false;
  std::vector<int> parent(sys.curves.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> in_subset(sys.curves.size(), 0);
  for (int c : subset) in_subset[c] = 1;
  for (const Crossing& x : sys.crossings)
    if (in_subset[x.a] && in_subset[x.b]) parent[find(x.a)] = find(x.b);
  const int root = find(subset[0]);
  return std::all_of(subset.begin(), subset.end(),
                     [&](int c) { return find(c) == root; });
}

void check_subset(const CurveSystem& sys, const std::vector<int>& subset) {
  if (subset.empty()) throw EmptySystem("curve subset is empty");
  std::vector<char> used(sys.curves.size(), 0);
  for (int c : subset) {
    if (c < 0 || c >= static_cast<int>(sys.curves.size()))
      throw Error("curve index " + std::to_string(c) + " out of range");
    if (used[c])
      throw Error("curve index " + std::to_string(c) + " listed twice");
    used[c] = 1;
  }
}

// Core filling decision without the minimality scan.
FillingReport fills_core(const CurveSystem& sys,
                         const std::vector<int>& subset) {
  const Ribbon rb = build_ribbon(sys, subset);
  FillingReport r;
  r.V = static_cast<int>(rb.kept.size());
  r.E = static_cast<int>(rb.arcs.size());
  r.F = count_faces(rb);
  r.euler = r.V - r.E + r.F;
  r.fills = connected_by_crossings(sys, subset) &&
            rb.curves_with_arcs == static_cast<int>(subset.size()) &&
            r.euler == -2;
  return r;
}

}  // namespace

FillingReport fills(const CurveSystem& sys, const std::vector<int>& subset) {
  check_subset(sys, subset);
  FillingReport r = fills_core(sys, subset);
  if (r.fills && subset.size() > 1) {
    r.minimal = true;
    // Drop one curve at a time: a filling subsystem stays filling after
    // removing any curve outside some minimal filling core, so testing
    // single removals is not enough; scan all proper nonempty subsets.
    const int n = static_cast<int>(subset.size());
    for (int mask = 1; mask + 1 < (1 << n) && r.minimal; ++mask) {
      std::vector<int> sub;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) sub.push_back(subset[i]);
      if (fills_core(sys, sub).fills) r.minimal = false;
    }
  } else if (r.fills) {
    r.minimal = true;  // a single filling curve has no proper subsets
  }
  return r;
}

bool minimal_filling(const CurveSystem& sys, const std::vector<int>& subset) {
  const FillingReport r = fills(sys, subset);
  if (!r.fills) throw NotFilling("curve subset does not fill");
  return r.minimal;
}

const CurveClass& dual_curve(const CurveSystem& sys, int curve,
                             const std::vector<int>& within) {
  check_subset(sys, within);
  if (curve < 0 || curve >= static_cast<int>(sys.curves.size()))
    throw Error("curve index out of range");
  if (std::find(within.begin(), within.end(), curve) == within.end())
    throw Error("curve must be a member of the subset");
  for (std::size_t k = 0; k < sys.curves.size(); ++k) {
    const int cand = static_cast<int>(k);
    if (sys.intersections(cand, curve) < 1) continue;
    const bool clean = std::all_of(
        within.begin(), within.end(), [&](int other) {
          return other == curve || sys.intersections(cand, other) == 0;
        });
    if (clean) return sys.curves[k];
  }
  throw CatalogIncomplete("no stored curve crosses '" +
                          sys.curves[curve].id +
                          "' and avoids the rest of the subset");
}

}  // namespace syslab
