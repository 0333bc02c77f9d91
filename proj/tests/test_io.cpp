#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "softzca/error.hpp"
#include "softzca/io.hpp"
#include "softzca/synthetic.hpp"
#include "softzca/whitening.hpp"

namespace softzca {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("softzca_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidInput;
}

RowMatrix awkward_values() {
  RowMatrix m(3, 4);
  m << 0.1, -0.0, 1e-300, std::numeric_limits<double>::denorm_min(),  //
      1.0 / 3.0, -2.5e17, std::numeric_limits<double>::max(), 42.0,   //
      -1e-7, 3.141592653589793, 2.718281828459045, -0.2;
  return m;
}

bool bitwise_equal(const RowMatrix& a, const RowMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

TEST_F(IoTest, NpyFloat64RoundTripIsBitExact) {
  const RowMatrix m = awkward_values();
  io::write_npy(dir_ / "m.npy", m);
  const auto back = io::read_npy(dir_ / "m.npy");
  EXPECT_EQ(back.dtype, io::NpyDtype::kFloat64);
  EXPECT_TRUE(bitwise_equal(back.data, m));
  // Re-encoding the decoded array reproduces the file byte for byte.
  EXPECT_EQ(io::encode_npy(back.data), io::read_file(dir_ / "m.npy"));
}

TEST_F(IoTest, NpyFloat32RoundTripIsBitExact) {
  const std::vector<double> spectrum{3, 2, 1};
  const RowMatrix m = generate_anisotropic_gaussian(1, 20, spectrum, true).data();
  const std::string bytes = io::encode_npy(m, io::NpyDtype::kFloat32);
  const auto back = io::decode_npy(bytes);
  EXPECT_EQ(back.dtype, io::NpyDtype::kFloat32);
  EXPECT_EQ(io::encode_npy(back.data, io::NpyDtype::kFloat32), bytes);
  EXPECT_LE((back.data - m).cwiseAbs().maxCoeff(), 1e-6 * m.cwiseAbs().maxCoeff());
}

TEST_F(IoTest, NpyHeaderLayout) {
  const std::string bytes = io::encode_npy(RowMatrix::Zero(3, 2));
  EXPECT_EQ(bytes.substr(0, 6), "\x93NUMPY");
  EXPECT_EQ(bytes[6], '\x01');
  EXPECT_EQ(bytes[7], '\x00');
  const std::size_t header_len =
      static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
  EXPECT_EQ((10 + header_len) % 64, 0u);
  const std::string header = bytes.substr(10, header_len);
  EXPECT_EQ(header.rfind("{'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), }", 0), 0u);
  EXPECT_EQ(header.back(), '\n');
  EXPECT_EQ(bytes.size(), 10 + header_len + 6 * sizeof(double));
}

TEST_F(IoTest, NpyRejectsUnsupportedArrays) {
  std::string bytes = io::encode_npy(RowMatrix::Zero(2, 2));
  std::string bad_dtype = bytes;
  bad_dtype.replace(bad_dtype.find("<f8"), 3, ">f8");
  EXPECT_EQ(kind_of([&] { io::decode_npy(bad_dtype); }), ErrorKind::kFormat);

  std::string fortran = bytes;
  fortran.replace(fortran.find("False"), 5, "True ");
  EXPECT_EQ(kind_of([&] { io::decode_npy(fortran); }), ErrorKind::kFormat);

  std::string one_d = bytes;
  one_d.replace(one_d.find("(2, 2)"), 6, "(4,)  ");
  EXPECT_EQ(kind_of([&] { io::decode_npy(one_d); }), ErrorKind::kFormat);

  EXPECT_EQ(kind_of([&] { io::decode_npy(bytes.substr(0, bytes.size() - 3)); }),
            ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { io::decode_npy("not an npy file"); }), ErrorKind::kFormat);
}

TEST_F(IoTest, CsvParsing) {
  const RowMatrix m = io::parse_csv_matrix("1,2,3\n\n4.5, -6e-3 ,7\r\n");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 3);
  EXPECT_EQ(m(1, 0), 4.5);
  EXPECT_EQ(m(1, 1), -6e-3);
  EXPECT_EQ(kind_of([] { io::parse_csv_matrix("1,2\n3\n"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { io::parse_csv_matrix("1,abc\n"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { io::parse_csv_matrix("\n\n"); }), ErrorKind::kFormat);
}

TEST_F(IoTest, CsvWriteReadIsExact) {
  const RowMatrix m = awkward_values();
  io::write_csv_matrix(dir_ / "m.csv", m);
  EXPECT_TRUE(bitwise_equal(io::read_csv_matrix(dir_ / "m.csv"), m));
}

TEST_F(IoTest, LoadEmbeddingsDispatchesOnExtension) {
  const RowMatrix m = awkward_values().leftCols(2).cwiseMin(1e6);
  io::write_npy(dir_ / "a.npy", m);
  io::write_csv_matrix(dir_ / "a.csv", m);
  EXPECT_EQ(io::load_embeddings(dir_ / "a.npy").data(), m);
  EXPECT_EQ(io::load_embeddings(dir_ / "a.csv").data(), m);
  EXPECT_EQ(kind_of([&] { io::load_embeddings(dir_ / "a.txt"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { io::load_embeddings(dir_ / "missing.npy"); }), ErrorKind::kIo);
}

TEST_F(IoTest, LoadEmbeddingsReportsPathOnBadContent) {
  io::write_file(dir_ / "bad.csv", "1,nan\n2,3\n");
  try {
    io::load_embeddings(dir_ / "bad.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("bad.csv"), std::string::npos);
  }
}

TEST_F(IoTest, TransformContainerRoundTripIsBitExact) {
  const std::vector<double> spectrum{40, 7, 3, 1, 0.2};
  const auto x = generate_anisotropic_gaussian(9, 200, spectrum, true);
  for (Method m : {Method::kZca, Method::kSoftZca, Method::kPca, Method::kCholesky}) {
    const double eps = m == Method::kZca ? 0.0 : 0.1 / 3.0;
    const auto t = build_transform(fit_statistics(x), m, eps);
    const fs::path path = dir_ / "t.transform";
    io::write_transform(path, t);
    const auto back = io::read_transform(path);
    EXPECT_EQ(back.method, t.method);
    EXPECT_EQ(std::memcmp(&back.epsilon, &t.epsilon, sizeof(double)), 0);
    EXPECT_EQ(back.mean, t.mean);
    EXPECT_EQ(back.matrix, t.matrix);
    EXPECT_EQ(io::encode_transform(back), io::read_file(path));
  }
}

TEST_F(IoTest, TransformContainerLayout) {
  const auto bytes = io::encode_transform(identity_transform(3));
  EXPECT_EQ(bytes.substr(0, 6), std::string("\x93WHTN\x01", 6));
  std::uint32_t header_len = 0;
  std::memcpy(&header_len, bytes.data() + 6, 4);
  EXPECT_EQ((10 + header_len) % 16, 0u);
  EXPECT_NE(bytes.find("\"format_version\":1"), std::string::npos);
  EXPECT_EQ(bytes.size(), 10 + header_len + (3 + 9) * sizeof(double));
}

TEST_F(IoTest, TransformContainerRejectsCorruption) {
  const auto bytes = io::encode_transform(identity_transform(3));
  EXPECT_EQ(kind_of([&] { io::decode_transform(bytes.substr(0, bytes.size() - 8)); }),
            ErrorKind::kFormat);
  std::string bad_method = bytes;
  bad_method.replace(bad_method.find("none"), 4, "nope");
  EXPECT_EQ(kind_of([&] { io::decode_transform(bad_method); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { io::decode_transform("\x93NUMPY"); }), ErrorKind::kFormat);
}

TEST_F(IoTest, Manifest) {
  io::write_file(dir_ / "m.json", R"({"count": 3, "ids": ["a", "b", 7], "model": "x"})");
  const auto m = io::read_manifest(dir_ / "m.json");
  EXPECT_EQ(m.count, 3u);
  EXPECT_EQ(m.ids, (std::vector<std::string>{"a", "b", "7"}));

  io::write_file(dir_ / "bad.json", R"({"count": 2, "ids": ["a"]})");
  EXPECT_EQ(kind_of([&] { io::read_manifest(dir_ / "bad.json"); }), ErrorKind::kFormat);
  io::write_file(dir_ / "worse.json", "{not json");
  EXPECT_EQ(kind_of([&] { io::read_manifest(dir_ / "worse.json"); }), ErrorKind::kFormat);
}

TEST_F(IoTest, WriteFileLeavesNoTemporary) {
  io::write_file(dir_ / "out.bin", "abc");
  EXPECT_EQ(io::read_file(dir_ / "out.bin"), "abc");
  EXPECT_FALSE(fs::exists(dir_ / "out.bin.tmp"));
}

}  // namespace
}  // namespace softzca
