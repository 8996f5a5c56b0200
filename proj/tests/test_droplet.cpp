#include <catch2/catch_amalgamated.hpp>

#include "ubp/droplet.hpp"
#include "ubp/stable_set.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace ubp;

namespace {

const Dir E{1, 0}, N{0, 1}, W{-1, 0}, S{0, -1};

std::vector<Dir> diamond_dirs() {
  return {Dir{1, 1}, Dir{-1, 1}, Dir{-1, -1}, Dir{1, -1}};
}

std::vector<Dir> knight_dirs() {
  return {Dir{1, 2}, Dir{-2, 1}, Dir{-1, -2}, Dir{2, -1}};
}

// Scan oracle: all sites of a bounded droplet found by brute force.
std::vector<Site> scan_sites(const Droplet& d, i64 r) {
  std::vector<Site> out;
  for (i64 y = -r; y <= r; ++y)
    for (i64 x = -r; x <= r; ++x)
      if (d.contains(Site{x, y})) out.push_back(Site{x, y});
  return out;
}

UpdateFamily named(const char* name) {
  UpdateFamily f;
  REQUIRE(named_family(name, f));
  return f;
}

ArcSet point_set(std::initializer_list<Dir> pts) {
  std::vector<Arc> raw;
  for (const Dir& d : pts) raw.push_back(Arc{d, d, true, true});
  return ArcSet::from_arcs(raw);
}

}  // namespace

TEST_CASE("minimal_droplet over axis directions is the bounding box") {
  Droplet d = minimal_droplet({{0, 0}, {2, 1}}, axis_directions());
  CHECK(d.offsets == std::vector<i64>{2, 1, 0, 0});
  CHECK(droplet_sites(d) ==
        std::vector<Site>{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}});
  CHECK(sq_diam(d) == 5);
  CHECK_FALSE(droplet_empty(d));
}

TEST_CASE("droplet membership identities") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<i64> c(-8, 8);
  Droplet d = minimal_droplet({{0, 0}, {3, 1}, {-2, 4}}, diamond_dirs());
  for (int i = 0; i < 100; ++i) {
    Site s{c(rng), c(rng)};
    Site t{c(rng), c(rng)};
    CHECK(d.translated(t).contains(s + t) == d.contains(s));
    if (d.contains(s)) CHECK(d.inflated(1).contains(s));
  }
}

TEST_CASE("droplet_sites equals the scan oracle off axis") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<i64> c(-5, 5);
  for (const auto& dirs : {diamond_dirs(), knight_dirs()}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Site> pts = {{c(rng), c(rng)}, {c(rng), c(rng)},
                               {c(rng), c(rng)}};
      Droplet d = minimal_droplet(pts, dirs);
      auto got = droplet_sites(d);
      std::sort(got.begin(), got.end());
      auto expect = scan_sites(d, 24);
      std::sort(expect.begin(), expect.end());
      CHECK(got == expect);
      for (const Site& p : pts) CHECK(d.contains(p));
      CHECK(sq_diam(d) == sq_diam_sites(got));
    }
  }
}

TEST_CASE("sq_diam special values") {
  Droplet pt = minimal_droplet({{4, -1}}, axis_directions());
  CHECK(sq_diam(pt) == 0);
  CHECK(droplet_sites(pt) == std::vector<Site>{{4, -1}});

  Droplet two = minimal_droplet({{0, 0}, {3, 2}}, axis_directions());
  CHECK(sq_diam(two) == 13);

  Droplet box = minimal_droplet({{0, 0}, {3, 4}}, axis_directions());
  CHECK(sq_diam(box) == 25);

  Droplet empty{axis_directions(), {-1, 0, 0, 0}};
  CHECK(droplet_empty(empty));
  CHECK_THROWS_AS(sq_diam(empty), PreconditionError);

  Droplet off_empty{knight_dirs(), {-1, -1, -1, -1}};
  CHECK(droplet_empty(off_empty));
  CHECK_THROWS_AS(sq_diam(off_empty), PreconditionError);
}

TEST_CASE("tightened pulls half-planes onto lattice points") {
  Droplet loose{knight_dirs(), {1, 1, 1, 1}};
  CHECK(droplet_sites(loose) == std::vector<Site>{{0, 0}});
  Droplet tight = tightened(loose);
  CHECK(tight.offsets == std::vector<i64>{0, 0, 0, 0});
  CHECK(tightened(tight) == tight);

  // Tightening never grows an offset and never changes the site set.
  std::mt19937 rng(43);
  std::uniform_int_distribution<i64> c(-4, 4);
  for (int rep = 0; rep < 20; ++rep) {
    Droplet d = minimal_droplet({{c(rng), c(rng)}, {c(rng), c(rng)}},
                                diamond_dirs());
    Droplet loose2 = d;
    for (i64& o : loose2.offsets) o += rep % 2;  // odd reps add slack
    Droplet t = tightened(loose2);
    CHECK(droplet_sites(t) == droplet_sites(loose2));
    for (std::size_t i = 0; i < t.offsets.size(); ++i)
      CHECK(t.offsets[i] <= loose2.offsets[i]);
    CHECK(tightened(t) == t);
  }
}

TEST_CASE("minimal_droplet validates its direction set") {
  CHECK_THROWS_AS(minimal_droplet({{0, 0}}, {E, N}), PreconditionError);
  CHECK_THROWS_AS(minimal_droplet({{0, 0}}, {E, N, Dir{-1, 1}}),
                  PreconditionError);
  CHECK_THROWS_AS(minimal_droplet({}, axis_directions()), PreconditionError);
  CHECK_NOTHROW(minimal_droplet({{0, 0}}, {E, N, Dir{-1, -1}}));
}

TEST_CASE("choose_spanning_directions prefers the axes") {
  CHECK(choose_spanning_directions(stable_set(named("twonbr"))) ==
        axis_directions());
  CHECK(choose_spanning_directions(stable_set(named("threenbr"))) ==
        axis_directions());
  CHECK(choose_spanning_directions(stable_set(named("duarte"))) ==
        axis_directions());
}

TEST_CASE("choose_spanning_directions falls back to stable endpoints") {
  // First spanning triple in angle order: E is skipped because (E, N, W)
  // closes with a straight angle, not a strict one.
  ArcSet stab = point_set({E, N, W, Dir{1, -1}});
  auto dirs = choose_spanning_directions(stab);
  REQUIRE(dirs == std::vector<Dir>{N, W, Dir{1, -1}});
  for (const Dir& d : dirs) CHECK(stab.contains(d));
  CHECK_NOTHROW(minimal_droplet({{0, 0}}, dirs));
}

TEST_CASE("choose_spanning_directions rejects supercritical sets") {
  CHECK_THROWS_AS(choose_spanning_directions(stable_set(named("east"))),
                  PreconditionError);
  CHECK_THROWS_AS(choose_spanning_directions(stable_set(named("onenbr"))),
                  PreconditionError);
}

TEST_CASE("dhat contains every rule offset and the origin, inflated once") {
  UpdateFamily two = named("twonbr");
  Droplet dhat = dhat_droplet(two, axis_directions());
  CHECK(dhat.offsets == std::vector<i64>{2, 2, 2, 2});
  CHECK(droplet_sites(dhat).size() == 25);

  UpdateFamily east = named("east");
  Droplet ehat = dhat_droplet(east, axis_directions());
  CHECK(ehat.offsets == std::vector<i64>{2, 1, 1, 1});
  CHECK(ehat.contains(Site{0, 0}));
  for (const Site& o : east.all_offsets()) CHECK(ehat.contains(o));
}

TEST_CASE("axis merge_test equals the delta-set oracle") {
  std::mt19937 rng(47);
  std::uniform_int_distribution<i64> c(-6, 6);
  std::uniform_int_distribution<i64> span(0, 3);
  Droplet dhat = dhat_droplet(named("twonbr"), axis_directions());
  auto dhat_sites = droplet_sites(dhat);
  std::set<Site> deltas;
  for (const Site& a : dhat_sites)
    for (const Site& b : dhat_sites) deltas.insert(a - b);

  for (int rep = 0; rep < 60; ++rep) {
    Site p1{c(rng), c(rng)}, p2{c(rng), c(rng)};
    Droplet d1 = minimal_droplet({p1, p1 + Site{span(rng), span(rng)}},
                                 axis_directions());
    Droplet d2 = minimal_droplet({p2, p2 + Site{span(rng), span(rng)}},
                                 axis_directions());
    bool expect = false;
    for (const Site& a : droplet_sites(d1))
      for (const Site& b : droplet_sites(d2))
        if (deltas.count(a - b)) expect = true;
    CHECK(merge_test(d1, d2, dhat) == expect);
  }
}

TEST_CASE("axis merge_test basic cases") {
  Droplet dhat = dhat_droplet(named("twonbr"), axis_directions());
  Droplet a = minimal_droplet({{0, 0}, {1, 1}}, axis_directions());
  CHECK(merge_test(a, a, dhat));

  Droplet near = minimal_droplet({{5, 0}, {6, 1}}, axis_directions());
  CHECK(merge_test(a, near, dhat));  // gap of 3 columns, reach is 4

  Droplet far = minimal_droplet({{6, 0}, {7, 1}}, axis_directions());
  CHECK_FALSE(merge_test(a, far, dhat));  // gap of 4 columns

  Droplet diag = minimal_droplet({{5, 5}}, axis_directions());
  CHECK(merge_test(a, diag, dhat));
  Droplet diag_far = minimal_droplet({{6, 5}}, axis_directions());
  CHECK_FALSE(merge_test(a, diag_far, dhat));
}

TEST_CASE("off-axis merge_test equals the delta-set oracle") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<i64> c(-5, 5);
  auto dirs = diamond_dirs();
  Droplet dhat = minimal_droplet({{0, 0}, {1, 0}, {0, 1}}, dirs).inflated(1);
  auto dhat_sites = droplet_sites(dhat);
  std::set<Site> deltas;
  for (const Site& a : dhat_sites)
    for (const Site& b : dhat_sites) deltas.insert(a - b);

  for (int rep = 0; rep < 40; ++rep) {
    Droplet d1 = minimal_droplet({{c(rng), c(rng)}, {c(rng), c(rng)}}, dirs);
    Droplet d2 = minimal_droplet({{c(rng), c(rng)}, {c(rng), c(rng)}}, dirs);
    bool expect = false;
    for (const Site& a : droplet_sites(d1))
      for (const Site& b : droplet_sites(d2))
        if (deltas.count(a - b)) expect = true;
    CHECK(merge_test(d1, d2, dhat) == expect);
  }
}
