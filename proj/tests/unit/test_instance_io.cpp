#include "oradmm/instance_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oradmm;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("oradmm_io_" + name);
}

}  // namespace

TEST(InstanceIo, LassoRoundTripIsExact) {
  const GeneratedLasso g = generate_lasso(12, 30, 5);
  std::stringstream ss;
  write_instance(ss, g.instance);
  const LassoInstance back = read_lasso(ss);
  EXPECT_EQ(back.A(), g.instance.A());
  EXPECT_EQ(back.b(), g.instance.b());
  EXPECT_EQ(back.rho(), g.instance.rho());
  EXPECT_EQ(back.seed(), 5u);
}

TEST(InstanceIo, CovselRoundTripIsExact) {
  const GeneratedCovsel g = generate_covsel(15, 9);
  std::stringstream ss;
  write_instance(ss, g.instance);
  const CovselInstance back = read_covsel(ss);
  EXPECT_EQ(back.S(), g.instance.S());
  EXPECT_EQ(back.tau(), g.instance.tau());
  EXPECT_EQ(back.seed(), 9u);
}

TEST(InstanceIo, HeaderLayout) {
  const LassoInstance L(Matrix::Identity(2, 2), Vector::Ones(2), 0.5, 3);
  std::stringstream ss;
  write_instance(ss, L);
  EXPECT_EQ(ss.str(), "oradmm-instance 1\nkind lasso\nm 2\nn 2\nrho 0.5\nseed 3\ndata\n1 0\n0 1\n1 1\n");
}

TEST(InstanceIo, FileRoundTripAndKindPeek) {
  const auto lasso_path = temp_file("lasso.txt");
  const auto covsel_path = temp_file("covsel.txt");
  const GeneratedLasso gl = generate_lasso(5, 10, 1);
  const GeneratedCovsel gc = generate_covsel(10, 2);
  save_instance(lasso_path, gl.instance);
  save_instance(covsel_path, gc.instance);
  EXPECT_EQ(peek_instance_kind(lasso_path), InstanceKind::lasso);
  EXPECT_EQ(peek_instance_kind(covsel_path), InstanceKind::covsel);
  EXPECT_EQ(load_lasso(lasso_path).A(), gl.instance.A());
  EXPECT_EQ(load_covsel(covsel_path).S(), gc.instance.S());
  std::filesystem::remove(lasso_path);
  std::filesystem::remove(covsel_path);
}

TEST(InstanceIo, ErrorsNameTheProblem) {
  const auto path = temp_file("bad.txt");
  {
    std::ofstream os(path);
    os << "oradmm-instance 1\nkind covsel\nn 2\ntau 0.1\nseed 0\ndata\n1 0\n0\n";
  }
  try {
    load_covsel(path);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find(path.string()), std::string::npos);
    EXPECT_NE(what.find("truncated"), std::string::npos);
  }
  EXPECT_THROW(load_lasso(path), std::runtime_error);
  std::filesystem::remove(path);
  EXPECT_THROW(load_lasso(temp_file("missing.txt")), std::runtime_error);

  std::stringstream junk("hello world");
  EXPECT_THROW(read_lasso(junk), std::runtime_error);
  std::stringstream version("oradmm-instance 7\n");
  EXPECT_THROW(read_lasso(version), std::runtime_error);
  std::stringstream nan_value("oradmm-instance 1\nkind lasso\nm 1\nn 1\nrho x\nseed 0\ndata\n1\n1\n");
  EXPECT_THROW(read_lasso(nan_value), std::runtime_error);
}
