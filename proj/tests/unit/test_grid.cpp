#include <vector>

#include "doctest.h"
#include "scout/grid.hpp"
#include "scout/rng.hpp"

using namespace scout;

TEST_SUITE("grid") {

TEST_CASE("dims index is row-major and contains clips the rectangle") {
  GridDims d{5, 3};
  CHECK(d.cell_count() == 15);
  CHECK(d.index(0, 0) == 0);
  CHECK(d.index(4, 0) == 4);
  CHECK(d.index(0, 1) == 5);
  CHECK(d.index(2, 2) == 12);
  CHECK(d.contains(0, 0));
  CHECK(d.contains(4, 2));
  CHECK(!d.contains(5, 0));
  CHECK(!d.contains(0, 3));
  CHECK(!d.contains(-1, 0));
}

TEST_CASE("cellset basic set algebra stays exact") {
  CellSet s(130);  // spans three words
  CHECK(s.capacity() == 130);
  CHECK(s.empty());
  CHECK(s.count() == 0);

  s.insert(0);
  s.insert(63);
  s.insert(64);
  s.insert(129);
  CHECK(s.count() == 4);
  CHECK(s.contains(63));
  CHECK(s.contains(64));
  CHECK(!s.contains(65));
  CHECK(!s.empty());

  CHECK(!s.insert_new(64));
  CHECK(s.insert_new(65));
  CHECK(s.count() == 5);
}

TEST_CASE("count_new measures the set difference used by marginal gains") {
  CellSet a(128);
  CellSet b(128);
  for (int i = 0; i < 10; ++i) a.insert(i);
  for (int i = 5; i < 20; ++i) b.insert(i);
  CHECK(a.count_new(b) == 10);  // b \ a = {10..19}
  CHECK(b.count_new(a) == 5);   // a \ b = {0..4}
  CHECK(a.intersects(b));

  CellSet c(128);
  c.insert(100);
  CHECK(!a.intersects(c));
  CHECK(a.count_new(c) == 1);

  a |= b;
  CHECK(a.count() == 20);
  CHECK(a.count_new(b) == 0);
}

TEST_CASE("union count equals inclusion-exclusion on random sets") {
  Pcg32 rng(321, 0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 200;
    CellSet a(n);
    CellSet b(n);
    int both = 0;
    for (int i = 0; i < n; ++i) {
      bool ia = rng.next_double() < 0.3;
      bool ib = rng.next_double() < 0.4;
      if (ia) a.insert(i);
      if (ib) b.insert(i);
      if (ia && ib) ++both;
    }
    int expect_union = a.count() + b.count() - both;
    CHECK(a.count() + a.count_new(b) == expect_union);
    CellSet u = a;
    u |= b;
    CHECK(u.count() == expect_union);
  }
}

TEST_CASE("to_indices returns sorted indices and round-trips") {
  CellSet s(100);
  s.insert(77);
  s.insert(3);
  s.insert(64);
  s.insert(0);
  auto idx = s.to_indices();
  REQUIRE(idx.size() == 4);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 3);
  CHECK(idx[2] == 64);
  CHECK(idx[3] == 77);

  CellSet back = CellSet::from_indices(100, idx);
  CHECK(back == s);
}

TEST_CASE("from_indices rejects out-of-range cells") {
  std::vector<int32_t> bad{0, 100};
  CHECK_THROWS_AS(CellSet::from_indices(100, bad), FormatError);
  std::vector<int32_t> neg{-1};
  CHECK_THROWS_AS(CellSet::from_indices(100, neg), FormatError);
}

TEST_CASE("equality compares capacity and contents") {
  CellSet a(64);
  CellSet b(64);
  CHECK(a == b);
  a.insert(5);
  CHECK(!(a == b));
  b.insert(5);
  CHECK(a == b);
  CellSet c(65);
  c.insert(5);
  CHECK(!(a == c));
}

}  // TEST_SUITE
