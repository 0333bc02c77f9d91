#include "softzca/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "softzca/error.hpp"

namespace softzca::io {

static_assert(std::endian::native == std::endian::little,
              "the NPY and transform readers assume a little-endian host");

namespace {

constexpr std::string_view kNpyMagic = "\x93NUMPY";
constexpr std::string_view kTransformMagic = "\x93WHTN\x01";
constexpr int kTransformFormatVersion = 1;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

template <typename T>
T read_le(std::string_view bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void append_le(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

void append_doubles(std::string& out, const double* data, std::size_t count) {
  out.append(reinterpret_cast<const char*>(data), count * sizeof(double));
}

// Value of `'key': ` inside a Python dict literal, up to the next top-level
// comma or closing brace.
std::string npy_header_field(std::string_view header, std::string_view key) {
  const std::string quoted = "'" + std::string(key) + "'";
  const auto at = header.find(quoted);
  if (at == std::string_view::npos) {
    throw Error(ErrorKind::kFormat, "NPY header is missing '" + std::string(key) + "'");
  }
  auto pos = header.find(':', at + quoted.size());
  if (pos == std::string_view::npos) {
    throw Error(ErrorKind::kFormat, "malformed NPY header");
  }
  ++pos;
  int depth = 0;
  std::size_t end = pos;
  for (; end < header.size(); ++end) {
    const char c = header[end];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || c == '}')) break;
  }
  return trim(header.substr(pos, end - pos));
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw Error(ErrorKind::kFormat, "malformed NPY shape " + text);
  }
  std::vector<std::size_t> dims;
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw Error(ErrorKind::kFormat, "malformed NPY shape " + text);
    }
    dims.push_back(value);
  }
  return dims;
}

}  // namespace

std::string encode_npy(const RowMatrix& data, NpyDtype dtype) {
  std::string header = "{'descr': '";
  header += dtype == NpyDtype::kFloat32 ? "<f4" : "<f8";
  header += "', 'fortran_order': False, 'shape': (" + std::to_string(data.rows()) + ", " +
            std::to_string(data.cols()) + "), }";
  // magic(6) + version(2) + length(2) + header + '\n' aligned to 64 bytes.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header += '\n';

  std::string out(kNpyMagic);
  out += '\x01';
  out += '\x00';
  append_le(out, static_cast<std::uint16_t>(header.size()));
  out += header;

  const auto count = static_cast<std::size_t>(data.size());
  if (dtype == NpyDtype::kFloat64) {
    append_doubles(out, data.data(), count);
  } else {
    out.reserve(out.size() + count * sizeof(float));
    for (std::size_t i = 0; i < count; ++i) {
      append_le(out, static_cast<float>(data.data()[i]));
    }
  }
  return out;
}

NpyArray decode_npy(std::string_view bytes) {
  if (bytes.size() < 10 || bytes.substr(0, 6) != kNpyMagic) {
    throw Error(ErrorKind::kFormat, "not an NPY file (bad magic)");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t header_start = 0;
  if (major == 1) {
    header_len = read_le<std::uint16_t>(bytes, 8);
    header_start = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw Error(ErrorKind::kFormat, "truncated NPY header");
    header_len = read_le<std::uint32_t>(bytes, 8);
    header_start = 12;
  } else {
    throw Error(ErrorKind::kFormat, "unsupported NPY version " + std::to_string(major));
  }
  if (bytes.size() < header_start + header_len) {
    throw Error(ErrorKind::kFormat, "truncated NPY header");
  }
  const std::string_view header = bytes.substr(header_start, header_len);

  const std::string descr = npy_header_field(header, "descr");
  NpyArray out;
  std::size_t item_size = 0;
  if (descr == "'<f8'") {
    out.dtype = NpyDtype::kFloat64;
    item_size = 8;
  } else if (descr == "'<f4'") {
    out.dtype = NpyDtype::kFloat32;
    item_size = 4;
  } else {
    throw Error(ErrorKind::kFormat,
                "unsupported NPY dtype " + descr + " (need little-endian <f4 or <f8)");
  }
  if (npy_header_field(header, "fortran_order") != "False") {
    throw Error(ErrorKind::kFormat, "Fortran-ordered NPY arrays are not supported");
  }
  const auto shape = parse_shape(npy_header_field(header, "shape"));
  if (shape.size() != 2) {
    throw Error(ErrorKind::kFormat,
                "NPY array must be 2-D, got " + std::to_string(shape.size()) + " dimensions");
  }

  const std::size_t count = shape[0] * shape[1];
  const std::size_t data_start = header_start + header_len;
  if (bytes.size() - data_start != count * item_size) {
    throw Error(ErrorKind::kFormat, "NPY payload size does not match its shape");
  }

  out.data.resize(static_cast<Eigen::Index>(shape[0]), static_cast<Eigen::Index>(shape[1]));
  if (out.dtype == NpyDtype::kFloat64) {
    std::memcpy(out.data.data(), bytes.data() + data_start, count * sizeof(double));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      out.data.data()[i] = read_le<float>(bytes, data_start + i * sizeof(float));
    }
  }
  return out;
}

NpyArray read_npy(const std::filesystem::path& path) {
  try {
    return decode_npy(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_npy(const std::filesystem::path& path, const RowMatrix& data, NpyDtype dtype) {
  write_file(path, encode_npy(data, dtype));
}

RowMatrix parse_csv_matrix(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string field = trim(line.substr(0, comma));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorKind::kFormat, "CSV line " + std::to_string(line_no) +
                                            ": cannot parse '" + field + "' as a number");
      }
      values.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw Error(ErrorKind::kFormat, "CSV line " + std::to_string(line_no) + " has " +
                                          std::to_string(fields) + " fields, expected " +
                                          std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) {
    throw Error(ErrorKind::kFormat, "CSV matrix is empty");
  }
  return Eigen::Map<const RowMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                     static_cast<Eigen::Index>(cols));
}

RowMatrix read_csv_matrix(const std::filesystem::path& path) {
  try {
    return parse_csv_matrix(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_csv_matrix(const std::filesystem::path& path, const RowMatrix& data) {
  std::string out;
  std::array<char, 32> buf{};
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j > 0) out += ',';
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), data(i, j));
      out.append(buf.data(), ptr);
    }
    out += '\n';
  }
  write_file(path, out);
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  RowMatrix data;
  if (ext == ".npy") {
    data = read_npy(path).data;
  } else if (ext == ".csv") {
    data = read_csv_matrix(path);
  } else {
    throw Error(ErrorKind::kFormat, path.string() + ": unknown matrix format (expected .npy or .csv)");
  }
  try {
    return EmbeddingSet(std::move(data));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingSet& set) {
  const std::string ext = lower_extension(path);
  if (ext == ".npy") {
    write_npy(path, set.data());
  } else if (ext == ".csv") {
    write_csv_matrix(path, set.data());
  } else {
    throw Error(ErrorKind::kFormat, path.string() + ": unknown matrix format (expected .npy or .csv)");
  }
}

PairManifest read_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("count") || !j.contains("ids") ||
      !j["count"].is_number_unsigned() || !j["ids"].is_array()) {
    throw Error(ErrorKind::kFormat,
                path.string() + ": manifest needs an unsigned \"count\" and an \"ids\" array");
  }
  PairManifest m;
  m.count = j["count"].get<std::size_t>();
  for (const auto& id : j["ids"]) {
    m.ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
  }
  if (m.ids.size() != m.count) {
    throw Error(ErrorKind::kFormat, path.string() + ": manifest count " +
                                        std::to_string(m.count) + " but " +
                                        std::to_string(m.ids.size()) + " ids");
  }
  return m;
}

std::string encode_transform(const WhiteningTransform& transform) {
  const auto d = transform.matrix.rows();
  if (transform.matrix.cols() != d || transform.mean.size() != d) {
    throw Error(ErrorKind::kShape, "transform has inconsistent dimensions");
  }
  const nlohmann::json meta = {
      {"format_version", kTransformFormatVersion},
      {"method", std::string(to_string(transform.method))},
      {"epsilon", transform.epsilon},
      {"dim", d},
      {"clamped_eigenvalues", transform.clamped_eigenvalues},
  };
  std::string header = meta.dump();
  const std::size_t unpadded = kTransformMagic.size() + 4 + header.size() + 1;
  header.append((16 - unpadded % 16) % 16, ' ');
  header += '\n';

  std::string out(kTransformMagic);
  append_le(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  append_doubles(out, transform.mean.data(), static_cast<std::size_t>(d));
  const RowMatrix w = transform.matrix;
  append_doubles(out, w.data(), static_cast<std::size_t>(d * d));
  return out;
}

WhiteningTransform decode_transform(std::string_view bytes) {
  const std::size_t prefix = kTransformMagic.size() + 4;
  if (bytes.size() < prefix || bytes.substr(0, kTransformMagic.size()) != kTransformMagic) {
    throw Error(ErrorKind::kFormat, "not a whitening transform file (bad magic)");
  }
  const auto header_len = read_le<std::uint32_t>(bytes, kTransformMagic.size());
  if (bytes.size() < prefix + header_len) {
    throw Error(ErrorKind::kFormat, "truncated transform header");
  }

  WhiteningTransform t;
  std::int64_t d = 0;
  try {
    const auto meta = nlohmann::json::parse(bytes.substr(prefix, header_len));
    if (meta.at("format_version").get<int>() != kTransformFormatVersion) {
      throw Error(ErrorKind::kFormat, "unsupported transform format version");
    }
    t.method = parse_method(meta.at("method").get<std::string>());
    t.epsilon = meta.at("epsilon").get<double>();
    d = meta.at("dim").get<std::int64_t>();
    t.clamped_eigenvalues = meta.value("clamped_eigenvalues", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("bad transform header: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::kFormat, std::string("bad transform header: ") + e.what());
  }
  if (d < 1) {
    throw Error(ErrorKind::kFormat, "transform dimension must be positive");
  }

  const auto ud = static_cast<std::size_t>(d);
  const std::size_t payload = prefix + header_len;
  if (bytes.size() - payload != (ud + ud * ud) * sizeof(double)) {
    throw Error(ErrorKind::kFormat, "transform payload size does not match its dimension");
  }
  t.mean.resize(d);
  std::memcpy(t.mean.data(), bytes.data() + payload, ud * sizeof(double));
  RowMatrix w(d, d);
  std::memcpy(w.data(), bytes.data() + payload + ud * sizeof(double), ud * ud * sizeof(double));
  t.matrix = w;
  return t;
}

void write_transform(const std::filesystem::path& path, const WhiteningTransform& transform) {
  write_file(path, encode_transform(transform));
}

WhiteningTransform read_transform(const std::filesystem::path& path) {
  try {
    return decode_transform(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorKind::kIo, "error reading " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIo, "cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorKind::kIo, "error writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot move output into place at " + path.string());
  }
}

}  // namespace softzca::io
