#include "doctest.h"
#include "fcalc/intmat.hpp"

using namespace fcalc;

TEST_CASE("sparse matrix basics") {
    SparseMat m(3, 2);
    CHECK(m.is_zero());
    m.set(0, 0, 5);
    m.set(2, 1, -1);
    CHECK(m.at(0, 0) == 5);
    CHECK(m.at(1, 0) == 0);
    CHECK(m.nnz() == 2);
    m.add(0, 0, -5);
    CHECK(m.at(0, 0) == 0);
    CHECK(m.nnz() == 1);
    m.set(2, 1, 0);
    CHECK(m.is_zero());
}

TEST_CASE("matrix product and identity") {
    SparseMat a = SparseMat::from_dense({{1, 2}, {3, 4}});
    SparseMat b = SparseMat::from_dense({{0, 1}, {1, 0}});
    SparseMat ab = a * b;
    CHECK(ab == SparseMat::from_dense({{2, 1}, {4, 3}}));
    CHECK(a * SparseMat::identity(2) == a);
    CHECK(SparseMat::identity(2) * a == a);
    CHECK((a - a).is_zero());
    CHECK(a + a == a.scaled(2));
    CHECK(a.negated() == a.scaled(-1));
}

TEST_CASE("transpose") {
    SparseMat a = SparseMat::from_dense({{1, 2, 0}, {0, 3, 4}});
    SparseMat t = a.transpose();
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 3; ++j) CHECK(a.at(i, j) == t.at(j, i));
    CHECK(t.transpose() == a);
}

TEST_CASE("direct sum and kronecker") {
    SparseMat a = SparseMat::from_dense({{1, 2}, {3, 4}});
    SparseMat b = SparseMat::from_dense({{5}});
    SparseMat s = a.direct_sum(b);
    CHECK(s.rows() == 3);
    CHECK(s.cols() == 3);
    CHECK(s.at(2, 2) == 5);
    CHECK(s.at(0, 2) == 0);

    SparseMat k = a.kronecker(b);
    CHECK(k.rows() == 2);
    CHECK(k.cols() == 2);
    CHECK(k.at(0, 0) == 5);
    CHECK(k.at(1, 0) == 15);

    SparseMat i2 = SparseMat::identity(2);
    SparseMat kk = i2.kronecker(a);
    // block diagonal with two copies of a, row-major pairing
    CHECK(kk.at(0, 0) == 1);
    CHECK(kk.at(1, 1) == 4);
    CHECK(kk.at(2, 2) == 1);
    CHECK(kk.at(3, 2) == 3);
    CHECK(kk.at(0, 2) == 0);
}

TEST_CASE("apply") {
    SparseMat a = SparseMat::from_dense({{1, 2}, {3, 4}});
    std::vector<Int> v{1, 1};
    auto w = a.apply(v);
    CHECK(w[0] == 3);
    CHECK(w[1] == 7);
}

TEST_CASE("row major entry listing is sorted") {
    SparseMat a(2, 2);
    a.set(1, 0, 7);
    a.set(0, 1, 9);
    a.set(0, 0, 1);
    auto e = a.entries_row_major();
    REQUIRE(e.size() == 3);
    CHECK(std::get<0>(e[0]) == 0);
    CHECK(std::get<1>(e[0]) == 0);
    CHECK(std::get<0>(e[1]) == 0);
    CHECK(std::get<1>(e[1]) == 1);
    CHECK(std::get<0>(e[2]) == 1);
}

TEST_CASE("exact determinant") {
    CHECK(dense_det({{1, 2}, {3, 4}}) == -2);
    CHECK(dense_det({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}) == 30);
    CHECK(dense_det({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
    CHECK(dense_det({{0, 1}, {1, 0}}) == -1);
}
