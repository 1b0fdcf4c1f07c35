#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "support/oracle.hpp"
#include "uniteig/embedding.hpp"
#include "uniteig/fixtures.hpp"
#include "uniteig/matrix_market.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/recover.hpp"
#include "uniteig/report.hpp"

using namespace uniteig;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "uniteig_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ComplexMatrix read_complex(const std::string& text) {
  std::istringstream in(text);
  return read_complex_matrix_market(in);
}

}  // namespace

TEST_SUITE("matrix market") {
  TEST_CASE("complex round trip is bit exact") {
    ComplexMatrix m = oracle::random_complex(5, 3, 1);
    m(0, 0) = cplx(std::numeric_limits<double>::denorm_min(), -0.0);
    m(1, 2) = cplx(1e300, -1e-300);
    m(4, 1) = cplx(0.1, 1.0 / 3.0);
    std::stringstream s;
    write_matrix_market(s, m);
    CHECK(read_complex_matrix_market(s) == m);
  }

  TEST_CASE("real round trip through a file") {
    const RealMatrix m = oracle::random_real(4, 6, 2);
    const auto path = scratch("real.mtx").string();
    save_matrix(path, m);
    CHECK(load_real_matrix(path) == m);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == kRealHeader);
  }

  TEST_CASE("storage is column-major") {
    const ComplexMatrix m = read_complex(
        "%%MatrixMarket matrix array complex general\n% comment\n2 2\n1 0\n2 0\n3 0\n4 0\n");
    CHECK(m(1, 0) == cplx(2.0, 0.0));
    CHECK(m(0, 1) == cplx(3.0, 0.0));
  }

  TEST_CASE("complex reader accepts real files") {
    const ComplexMatrix m = read_complex("%%MatrixMarket matrix array real general\n1 2\n1.5\n-2\n");
    CHECK(m(0, 0) == cplx(1.5, 0.0));
    CHECK(m(0, 1) == cplx(-2.0, 0.0));
  }

  TEST_CASE("vectors") {
    const std::vector<cplx> v = {cplx(1.0, 2.0), cplx(-0.5, 0.25), cplx(0.0, -1.0)};
    const auto path = scratch("vec.mtx").string();
    save_vector(path, v);
    CHECK(load_complex_vector(path) == v);
    save_matrix(path, ComplexMatrix(2, 2));
    CHECK_THROWS_AS(load_complex_vector(path), FormatError);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(read_complex(""), FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array real symmetric\n1 1\n1\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array complex general\n2 1\n1 0\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array real general\n1 1\n1\n2\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array real general\n1 1\n1e400\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array real general\n1 1\nx\n"),
                    FormatError);
    CHECK_THROWS_AS(read_complex("%%MatrixMarket matrix array real general\n1 1\nnan\n"),
                    InputError);
    std::istringstream in("%%MatrixMarket matrix array complex general\n1 1\n1 0\n");
    CHECK_THROWS_AS(read_real_matrix_market(in), FormatError);
    CHECK_THROWS_AS(load_complex_matrix("/nonexistent/u.mtx"), InputError);
  }

  TEST_CASE("file errors name the path") {
    const auto path = scratch("bad.mtx").string();
    std::ofstream(path) << "garbage\n";
    CHECK_THROWS_WITH_AS(load_complex_matrix(path), doctest::Contains("bad.mtx"), FormatError);
  }
}

TEST_SUITE("json reports") {
  TEST_CASE("recovery report fields") {
    const PlantedUnitary p = planted_unitary({{{0.5, 2}, {-2.0, 1}}, 3});
    const RecoveryReport r = recover(real_normal_eig(embed(p.u)), {}, p.u);
    const nlohmann::json doc = recovery_report_json(r, {{"z", "z.mtx"}}, true);
    CHECK(doc["version"] == version());
    CHECK(doc["inputs"]["z"] == "z.mtx");
    CHECK(doc["tolerances"]["tau_rank"] == "auto");
    CHECK(doc["tolerances"]["delta_group"].get<double>() == kDefaultDeltaGroup);
    CHECK(doc["total_rank"] == 3);
    CHECK(doc["pass"] == true);
    CHECK(doc["residuals"]["reference"] == "input");
    CHECK_FALSE(doc.contains("error"));
    REQUIRE(doc["groups"].size() == r.groups.size());
    for (std::size_t k = 0; k < r.groups.size(); ++k) {
      const auto& g = doc["groups"][k];
      CHECK(g["rank"].get<std::size_t>() + g["m_Ubar"].get<std::size_t>() ==
            g["m_M"].get<std::size_t>());
      CHECK(g["mu_re"].get<double>() == r.groups[k].mu.real());
      CHECK(g["singular_values"].size() == r.groups[k].m_m);
    }
  }

  TEST_CASE("explicit tau and error message") {
    RecoveryReport r;
    r.tau_rank = 1e-6;
    const nlohmann::json doc = recovery_report_json(r, {}, false, "boom");
    CHECK(doc["tolerances"]["tau_rank"].get<double>() == 1e-6);
    CHECK(doc["error"] == "boom");
    CHECK(doc["pass"] == false);
  }

  TEST_CASE("verification report lists every check") {
    const VerificationRecord v =
        verify(ComplexMatrix::identity(2), ComplexMatrix::identity(2), std::vector<cplx>(2, 1.0));
    const nlohmann::json doc = verification_json(v, {{"u", "u.mtx"}});
    CHECK(doc["pass"] == true);
    CHECK(doc["checks"].size() == v.checks.size());
    const auto path = scratch("verify.json").string();
    write_json(path, doc);
    std::ifstream in(path);
    CHECK(nlohmann::json::parse(in) == doc);
  }
}
