#include <doctest.h>

#include <omp.h>

#include "support.hpp"
#include "toepcov/kernels.hpp"
#include "toepcov/rulers.hpp"

using namespace toepcov;
using namespace toepcov::kernels;
using namespace testing_support;

namespace {

std::vector<int> zero_based(const Ruler& r) {
  std::vector<int> p;
  for (int i : r.indices()) p.push_back(i - 1);
  return p;
}

}  // namespace

TEST_CASE("lag sums: hand example") {
  RowMatrix x(2, 1);
  x << 1, 2;
  const std::vector<int> pos{0, 1};
  const LagSums s = lag_sums_serial(x, pos, 2);
  CHECK(s.sums == std::vector<double>{5.0, 4.0});
  CHECK(s.counts == std::vector<long>{2, 2});
}

TEST_CASE("lag sums: OpenMP matches serial bitwise across thread counts") {
  for (int d : {1, 7, 33, 100}) {
    for (const Ruler& r : {full_ruler(d), sqrt_ruler(d)}) {
      const std::vector<int> pos = zero_based(r);
      const RowMatrix x = random_matrix(static_cast<int>(pos.size()), 13, static_cast<std::uint64_t>(d));
      const LagSums ref = lag_sums_serial(x, pos, d);
      omp_set_num_threads(1);
      const LagSums single = lag_sums_omp(x, pos, d);
      for (int threads : {1, 2, 3}) {
        omp_set_num_threads(threads);
        const LagSums par = lag_sums_omp(x, pos, d);
        CHECK(par.counts == ref.counts);
        for (std::size_t s = 0; s < ref.sums.size(); ++s)
          CHECK(par.sums[s] == doctest::Approx(ref.sums[s]).epsilon(1e-12));
        CHECK(par.sums == single.sums);
      }
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("toeplitz matvec: OpenMP and serial agree with the dense product") {
  for (int d : {1, 2, 9, 64}) {
    const Vector a = random_matrix(d, 1, 10 + static_cast<std::uint64_t>(d)).col(0);
    const Vector x = random_matrix(d, 1, 20 + static_cast<std::uint64_t>(d)).col(0);
    const Vector want = densify(ToeplitzVector(a)) * x;
    Vector ys(d), yp(d);
    toeplitz_matvec_serial(a, x, ys);
    toeplitz_matvec_omp(a, x, yp);
    CHECK((ys - want).norm() <= 1e-12 * (1.0 + want.norm()));
    CHECK(ys == yp);
  }
}
