#include <cmath>
#include <filesystem>
#include <limits>

#include "test_support.hpp"

namespace fcoord {
namespace {

TEST(Csv, SeventeenDigitsRoundTrip) {
  testing::SplitMix rng(71);
  CsvTable t{{"x", "value"}, {}};
  for (int i = 0; i < 200; ++i) {
    t.rows.push_back({rng.uniform(-1e3, 1e3), std::ldexp(rng.uniform(), rng.integer(-300, 300))});
  }
  t.rows.push_back({0.1, -0.0});
  t.rows.push_back({std::numeric_limits<double>::denorm_min(), 1e308});
  const std::string text = to_csv(t);
  const CsvTable back = parse_csv(text);
  EXPECT_EQ(back, t);
  EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Csv, Malformed) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n3\n"), DomainError);
  EXPECT_THROW(parse_csv("a,b\n1,zz\n"), DomainError);
  EXPECT_THROW(parse_csv("a\n\n1e\n"), DomainError);
  EXPECT_EQ(parse_csv("a,b\r\n1,2\r\n").rows.size(), 1u);
}

TEST(Csv, ResidualAndSampleTables) {
  ResidualField f;
  f.xs = RealVector::LinSpaced(2, 0.0, 1.0);
  f.ys = RealVector::LinSpaced(3, -1.0, 1.0);
  f.values = ComplexMatrix::Zero(2, 3);
  f.values(1, 2) = {2.0, -1.0};
  const CsvTable real = residual_table(f, false);
  EXPECT_EQ(real.header, (std::vector<std::string>{"x", "y", "R"}));
  ASSERT_EQ(real.rows.size(), 6u);
  EXPECT_EQ(real.rows[5], (std::vector<double>{1.0, 1.0, 2.0}));
  const CsvTable cplx = residual_table(f, true);
  EXPECT_EQ(cplx.rows[5], (std::vector<double>{1.0, 1.0, 2.0, -1.0}));

  const CsvTable s = samples_table(f.xs, ComplexVector::Ones(2), false);
  EXPECT_EQ(s.header, (std::vector<std::string>{"x", "value"}));
  EXPECT_THROW(samples_table(f.xs, ComplexVector::Ones(3), false), DomainError);
}

TEST(Csv, KernelAndMatrixTables) {
  const Grid g = make_uniform_grid(0.0, 1.0, 8, false);
  const CsvTable k = kernel_table(gaussian(), g);
  ASSERT_EQ(k.rows.size(), 64u);
  EXPECT_NEAR(k.rows[9][2], std::exp(-std::pow(k.rows[9][0] - k.rows[9][1], 2)), 1e-15);
  const CsvTable m = matrix_table(OperatorMatrix::identity(g));
  EXPECT_EQ(m.rows.size(), 64u);
  EXPECT_EQ(m.rows[9], (std::vector<double>{1.0, 1.0, 1.0, 0.0}));
}

TEST(Files, ReadWriteAndErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "fcoord_io_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "a.txt"), "hello\n");
  EXPECT_THROW(read_text_file(dir / "missing.txt"), IoError);
  EXPECT_THROW(write_text_file(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Json, ConditionReportFields) {
  const nlohmann::json j = to_json(ConditionReport{4.0, 2.0, 1, 7});
  EXPECT_EQ(j.at("sigma_max"), 4.0);
  EXPECT_EQ(j.at("sigma_min"), 2.0);
  EXPECT_EQ(j.at("truncated"), 1);
  EXPECT_EQ(j.at("rank"), 7);
  EXPECT_EQ(dump_json(nlohmann::json{{"a", 1}}), "{\n  \"a\": 1\n}\n");
}

}  // namespace
}  // namespace fcoord
