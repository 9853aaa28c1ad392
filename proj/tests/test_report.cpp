#include "wavext/reference_tables.hpp"
#include "wavext/report.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace wavext;

namespace {

std::vector<ConvergenceRow> random_rows(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-30.0, 5.0);
  std::vector<ConvergenceRow> rows;
  for (int i = 0; i < n; ++i) {
    ConvergenceRow r;
    r.dof = 3 + 17 * i;
    r.h_x_max = std::exp(dist(rng) / 10.0);
    r.h_x_min = std::exp(dist(rng) / 10.0);
    r.h_t_max = std::exp(dist(rng) / 10.0);
    r.h_t_min = std::exp(dist(rng) / 10.0);
    r.err_l2 = std::exp(dist(rng));
    r.err_h1 = std::exp(dist(rng));
    if (i > 0) {
      r.eoc_l2 = dist(rng) / 7.0;
      r.eoc_h1 = 1.0 / 3.0 + i;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<ConvergenceRow> rows_from_reference(const ReferenceTable& ref, int count) {
  std::vector<ConvergenceRow> rows;
  for (int i = 0; i < count; ++i) {
    const ReferenceRow& p = ref.rows[static_cast<std::size_t>(i)];
    ConvergenceRow r;
    r.dof = p.dof;
    r.err_l2 = p.err_l2;
    r.err_h1 = p.err_h1;
    r.eoc_l2 = p.eoc_l2;
    r.eoc_h1 = p.eoc_h1;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("csv columns") {
  const std::vector<std::string> one = {"dof",    "h_x_max", "h_x_min", "h_t_max", "h_t_min",
                                        "err_l2", "eoc_l2",  "err_h1",  "eoc_h1"};
  CHECK(csv_columns(1) == one);
  std::vector<std::string> two = one;
  two.erase(two.begin() + 2);
  CHECK(csv_columns(2) == two);
}

TEST_CASE("csv round-trips bit-exactly") {
  for (int dim : {1, 2}) {
    auto rows = random_rows(6, 10 + static_cast<unsigned>(dim));
    if (dim == 2) {
      for (auto& r : rows) r.h_x_min = r.h_x_max;
    }
    std::stringstream ss;
    write_csv(ss, rows, dim);
    const auto back = read_csv(ss, dim);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].dof == rows[i].dof);
      CHECK(back[i].h_x_max == rows[i].h_x_max);
      CHECK(back[i].h_x_min == rows[i].h_x_min);
      CHECK(back[i].h_t_max == rows[i].h_t_max);
      CHECK(back[i].h_t_min == rows[i].h_t_min);
      CHECK(back[i].err_l2 == rows[i].err_l2);
      CHECK(back[i].err_h1 == rows[i].err_h1);
      CHECK(back[i].eoc_l2 == rows[i].eoc_l2);
      CHECK(back[i].eoc_h1 == rows[i].eoc_h1);
    }
  }
}

TEST_CASE("csv text layout") {
  ConvergenceRow r;
  r.dof = 3;
  r.h_x_max = 0.75;
  r.h_x_min = 0.25;
  r.h_t_max = 7.5;
  r.h_t_min = 1.25;
  r.err_l2 = 0.1;
  r.err_h1 = 2.0;
  std::ostringstream os;
  write_csv(os, {r}, 1);
  CHECK(os.str() ==
        "dof,h_x_max,h_x_min,h_t_max,h_t_min,err_l2,eoc_l2,err_h1,eoc_h1\n"
        "3,0.75,0.25,7.5,1.25,0.10000000000000001,,2,\n");
}

TEST_CASE("malformed csv is rejected") {
  std::istringstream header("dof,h_x_max\n");
  CHECK_THROWS_AS(read_csv(header, 1), std::runtime_error);
  std::istringstream cells("dof,h_x_max,h_t_max,h_t_min,err_l2,eoc_l2,err_h1,eoc_h1\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(cells, 2), std::runtime_error);
  std::istringstream number("dof,h_x_max,h_t_max,h_t_min,err_l2,eoc_l2,err_h1,eoc_h1\n1,2,3,4,5x,,6,\n");
  CHECK_THROWS_AS(read_csv(number, 2), std::runtime_error);
}

TEST_CASE("markdown mirrors the printed table format") {
  ConvergenceRow a;
  a.dof = 24384;
  a.h_x_max = 0.0234375;
  a.h_x_min = 0.0078125;
  a.h_t_max = 0.234375;
  a.h_t_min = 0.04;
  a.err_l2 = 1.8123;
  a.err_h1 = 251.4;
  a.eoc_l2 = 1.9512;
  a.eoc_h1 = 0.96;
  std::ostringstream one;
  write_markdown(one, {a}, 1, 2);
  CHECK(one.str() ==
        "| dof | h_x,max | h_x,min | h_t,max | h_t,min | L2 error | eoc | H1 error | eoc |\n"
        "|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n"
        "| 24384 | 0.0234 | 0.0078 | 0.2344 | 0.0400 | 1.8e+00 | 2.0 | 2.5e+02 | 1.0 |\n");

  ConvergenceRow b;
  b.dof = 20;
  b.h_x_max = b.h_x_min = 0.35355339059327379;
  b.h_t_max = 1.5;
  b.h_t_min = 0.125;
  b.err_l2 = 5.2061e-3;
  b.err_h1 = 1.33149;
  std::ostringstream two;
  write_markdown(two, {b}, 2, 4);
  CHECK(two.str() ==
        "| dof | h_x | h_t,max | h_t,min | L2 error | eoc | H1 error | eoc |\n"
        "|---:|---:|---:|---:|---:|---:|---:|---:|\n"
        "| 20 | 0.3536 | 1.5000 | 0.1250 | 5.206e-03 | - | 1.331e+00 | - |\n");
}

TEST_CASE("output is deterministic") {
  const auto rows = random_rows(4, 3);
  std::ostringstream a, b;
  write_csv(a, rows, 1);
  write_csv(b, rows, 1);
  CHECK(a.str() == b.str());
}

TEST_CASE("key=value configuration") {
  const std::vector<std::string> allowed = {"problem", "levels"};
  std::istringstream good("# comment\n\nproblem = u2  # trailing\n  levels=3\nlevels=4\n");
  const auto cfg = read_key_value_config(good, allowed);
  CHECK(cfg.size() == 2);
  CHECK(cfg.at("problem") == "u2");
  CHECK(cfg.at("levels") == "4");

  std::istringstream unknown("solver=tensor\n");
  CHECK_THROWS_WITH_AS(read_key_value_config(unknown, allowed), "config line 1: unknown key 'solver'",
                       std::runtime_error);
  std::istringstream no_eq("problem u1\n");
  CHECK_THROWS_AS(read_key_value_config(no_eq, allowed), std::runtime_error);
  std::istringstream empty("\nlevels=\n");
  CHECK_THROWS_WITH_AS(read_key_value_config(empty, allowed), "config line 2: empty value for 'levels'",
                       std::runtime_error);
}

TEST_CASE("embedded reference tables") {
  const ReferenceTable& t1 = reference_table("u1");
  CHECK(t1.gating_rows == 8);
  CHECK(t1.rows[0].dof == 3);
  CHECK(t1.rows[7].dof == 97920);
  CHECK(t1.error_tolerance[0] == 0.05);
  CHECK(t1.eoc_tolerance == 0.1);
  const ReferenceTable& t2 = reference_table("u2");
  CHECK(t2.gating_rows == 4);
  CHECK(t2.rows[0].dof == 20);
  CHECK(t2.rows[3].dof == 22560);
  CHECK(t2.error_tolerance[0] == 0.01);
  CHECK_THROWS_AS(reference_table("u3"), std::invalid_argument);
}

TEST_CASE("reference comparison accepts the table itself and flags perturbations") {
  const ReferenceTable& ref = reference_table_u2();
  auto rows = rows_from_reference(ref, 4);
  for (const RowVerdict& v : compare_with_reference(rows, ref)) CHECK(v.pass);

  rows[1].err_h1 *= 1.02;
  auto verdicts = compare_with_reference(rows, ref);
  CHECK(verdicts[0].pass);
  CHECK_FALSE(verdicts[1].pass);
  CHECK(verdicts[1].level == 2);
  CHECK(verdicts[1].detail.find("rel 2.00e-02") != std::string::npos);

  rows = rows_from_reference(ref, 3);
  *rows[2].eoc_l2 += 0.2;
  CHECK_FALSE(compare_with_reference(rows, ref)[2].pass);
  rows[2].eoc_l2.reset();
  CHECK_FALSE(compare_with_reference(rows, ref)[2].pass);
  rows = rows_from_reference(ref, 1);
  rows[0].dof = 21;
  CHECK_FALSE(compare_with_reference(rows, ref)[0].pass);
}
