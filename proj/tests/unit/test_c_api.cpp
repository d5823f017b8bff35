#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "doctest.h"
#include "slspectra/slspectra.h"

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("version and error state") {
  CHECK(std::strlen(sl_version()) > 0);
  sl_operator* op = nullptr;
  CHECK(sl_operator_parse("T1:beta=1", &op) == SL_ERR_CONFIG);
  CHECK(op == nullptr);
  CHECK(std::string(sl_last_error()).find("beta") != std::string::npos);
  CHECK(sl_operator_parse(nullptr, &op) == SL_ERR_CONFIG);
  CHECK(sl_operator_create(SL_FAMILY_T3, -1.0, 0.0, &op) == SL_ERR_CONFIG);
}

TEST_CASE("potential handles") {
  const double cos_re[2] = {1.0, 0.0}, sin_re[2] = {0.0, 2.0};
  sl_potential* q = nullptr;
  REQUIRE(sl_potential_create(cos_re, nullptr, sin_re, nullptr, 2, &q) == SL_OK);
  double re = 0, im = 0;
  REQUIRE(sl_potential_eval(q, 0.125, &re, &im) == SL_OK);
  CHECK(re == doctest::Approx(std::cos(kPi / 4) + 2.0));
  CHECK(im == 0.0);
  CHECK_FALSE(sl_potential_is_symmetric(q));
  sl_potential_destroy(q);

  CHECK(sl_potential_from_json("{\"cos\": {\"1\": [1, 0]}}", &q) == SL_OK);
  CHECK(sl_potential_is_symmetric(q));
  sl_potential_destroy(q);
  CHECK(sl_potential_from_json("not json", &q) == SL_ERR_CONFIG);
  CHECK(sl_potential_from_file("/nonexistent.json", &q) == SL_ERR_CONFIG);
  CHECK(sl_potential_create(cos_re, nullptr, sin_re, nullptr, 0, &q) == SL_ERR_CONFIG);
}

TEST_CASE("spectrum through the C interface") {
  sl_operator* op = nullptr;
  REQUIRE(sl_operator_parse("T1:beta=3", &op) == SL_OK);
  CHECK(sl_operator_family(op) == SL_FAMILY_T1);
  double gre = 0, gim = 0;
  REQUIRE(sl_operator_gamma(op, &gre, &gim) == SL_OK);
  CHECK(gre == doctest::Approx(32 * kPi));

  sl_potential* q = nullptr;
  REQUIRE(sl_potential_from_file(SL_TEST_DATA "/q_star.json", &q) == SL_OK);
  sl_solver_options opts;
  sl_solver_options_default(&opts);
  opts.threads = 2;
  sl_spectrum* s = nullptr;
  REQUIRE(sl_spectrum_compute(op, q, 9, 10, &opts, 0, &s) == SL_OK);
  CHECK(sl_spectrum_size(s) == 4);
  CHECK(sl_spectrum_disk_count(s) == 2);
  sl_eigen_record r;
  REQUIRE(sl_spectrum_record(s, 0, &r) == SL_OK);
  CHECK(r.n == 9);
  CHECK(r.j == 1);
  CHECK(sl_spectrum_record(s, 99, &r) == SL_ERR_CONFIG);
  sl_disk_info d;
  REQUIRE(sl_spectrum_disk(s, 1, &d) == SL_OK);
  CHECK(d.count == 2);
  CHECK(d.radius == 10.0);

  char* text = nullptr;
  REQUIRE(sl_spectrum_write(s, nullptr, SL_FORMAT_CSV, &text) == SL_OK);
  CHECK(std::string(text).rfind("n,j,re_lambda,im_lambda,multiplicity,residual\n", 0) == 0);
  sl_string_free(text);
  REQUIRE(sl_spectrum_write(s, nullptr, SL_FORMAT_JSON, &text) == SL_OK);
  CHECK(text[0] == '[');
  sl_string_free(text);

  double dev = -1;
  REQUIRE(sl_spectrum_deviation(s, s, 9, &dev) == SL_OK);
  CHECK(dev == 0.0);

  double lre = 0, lim = 0;
  int applicable = 0, iters = 0;
  REQUIRE(sl_leading_estimate(op, q, 10, 1, &lre, &lim, &applicable) == SL_OK);
  CHECK(applicable);
  REQUIRE(sl_fixed_point_refine(op, q, 10, 1, 1, -1, 1e-10, 100, &lre, &lim, &iters) == SL_OK);
  sl_eigen_record r1;
  REQUIRE(sl_spectrum_record(s, 2, &r1) == SL_OK);
  CHECK(std::abs(lre - r1.re) < 1e-3);

  sl_spectrum_destroy(s);
  sl_potential_destroy(q);
  sl_operator_destroy(op);
}

TEST_CASE("char_det and counting") {
  sl_operator* op = nullptr;
  REQUIRE(sl_operator_create(SL_FAMILY_PERIODIC, 0, 0, &op) == SL_OK);
  sl_potential* q = nullptr;
  const double zero = 0;
  REQUIRE(sl_potential_create(&zero, nullptr, nullptr, nullptr, 1, &q) == SL_OK);
  double re = 1, im = 1;
  REQUIRE(sl_char_det(op, q, 4 * kPi * kPi, 0, 1e-12, &re, &im) == SL_OK);
  CHECK(std::hypot(re, im) < 1e-10);
  CHECK(sl_char_det(op, q, 1, 0, -1.0, &re, &im) == SL_ERR_CONFIG);
  int count = -1;
  REQUIRE(sl_count_zeros(op, q, 16 * kPi * kPi, 0, 2, 1e-12, &count) == SL_OK);
  CHECK(count == 2);
  CHECK(sl_base_eigenvalue(SL_FAMILY_ANTIPERIODIC, 0) == doctest::Approx(kPi * kPi));
  sl_potential_destroy(q);
  sl_operator_destroy(op);
}

TEST_CASE("comparison and basis profile") {
  sl_operator* op = nullptr;
  REQUIRE(sl_operator_parse("T1:beta=3", &op) == SL_OK);
  sl_potential* q = nullptr;
  REQUIRE(sl_potential_from_file(SL_TEST_DATA "/q_star.json", &q) == SL_OK);

  sl_comparison* c = nullptr;
  REQUIRE(sl_comparison_compute(op, q, 8, 10, 1, -1, 1e-10, nullptr, 0, &c) == SL_OK);
  CHECK(sl_comparison_rows(c) == 6);
  CHECK(sl_comparison_inapplicable_rows(c) == 0);
  double slope, intercept, r2;
  int pts;
  REQUIRE(sl_comparison_rate(c, &slope, &intercept, &r2, &pts) == SL_OK);
  CHECK(pts == 6);
  sl_comparison_destroy(c);
  CHECK(sl_comparison_compute(op, q, 8, 10, 4, -1, 1e-10, nullptr, 0, &c) == SL_ERR_CONFIG);

  sl_basis_profile* p = nullptr;
  REQUIRE(sl_basis_profile_compute(op, q, 8, 12, nullptr, 0, &p) == SL_OK);
  CHECK(sl_basis_profile_evidence(p) == SL_EVIDENCE_PRESENT);
  CHECK(sl_basis_profile_effective_index(p) == 8);
  CHECK(sl_basis_profile_merged_disks(p) == 0);
  char* text = nullptr;
  REQUIRE(sl_basis_profile_write(p, SL_FORMAT_CSV, &text) == SL_OK);
  CHECK(std::string(text).rfind("n,j,re_lambda,im_lambda,abs_overlap,norm_identity,residual_scaled", 0) == 0);
  sl_string_free(text);
  sl_basis_profile_destroy(p);

  sl_operator* per = nullptr;
  REQUIRE(sl_operator_parse("periodic", &per) == SL_OK);
  CHECK(sl_basis_profile_compute(per, q, 8, 9, nullptr, 0, &p) == SL_ERR_CONFIG);
  sl_operator_destroy(per);
  sl_potential_destroy(q);
  sl_operator_destroy(op);
}
