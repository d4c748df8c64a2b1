#include "oradmm/instance_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace oradmm {

namespace {

constexpr const char* kMagic = "oradmm-instance";
constexpr int kVersion = 1;

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("failed to format value");
  return std::string(buf.data(), end);
}

void write_row(std::ostream& os, const auto& row) {
  for (Index j = 0; j < row.size(); ++j) {
    if (j) os << ' ';
    os << format_double(row[j]);
  }
  os << '\n';
}

using Header = std::map<std::string, std::string>;

Header read_header(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kMagic) {
    throw std::runtime_error("not an oradmm instance container");
  }
  if (version != kVersion) {
    throw std::runtime_error("unsupported container version " + std::to_string(version));
  }
  Header header;
  std::string key;
  while (is >> key) {
    if (key == "data") return header;
    std::string value;
    if (!(is >> value)) break;
    header[key] = value;
  }
  throw std::runtime_error("container header not terminated by 'data'");
}

const std::string& field(const Header& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw std::runtime_error("container header missing '" + key + "'");
  return it->second;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed number '" + s + "'");
  }
  return v;
}

template <typename T>
T parse_integer(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed integer '" + s + "'");
  }
  return v;
}

double read_value(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw std::runtime_error("container data truncated");
  return parse_double(token);
}

void require_kind(const Header& h, const std::string& kind) {
  if (field(h, "kind") != kind) {
    throw std::runtime_error("container holds a '" + field(h, "kind") + "' instance, expected '" +
                             kind + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return is;
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_instance(std::ostream& os, const LassoInstance& instance) {
  os << kMagic << ' ' << kVersion << '\n'
     << "kind lasso\n"
     << "m " << instance.rows() << '\n'
     << "n " << instance.cols() << '\n'
     << "rho " << format_double(instance.rho()) << '\n'
     << "seed " << instance.seed() << '\n'
     << "data\n";
  for (Index i = 0; i < instance.rows(); ++i) write_row(os, instance.A().row(i));
  write_row(os, instance.b());
}

void write_instance(std::ostream& os, const CovselInstance& instance) {
  os << kMagic << ' ' << kVersion << '\n'
     << "kind covsel\n"
     << "n " << instance.size() << '\n'
     << "tau " << format_double(instance.tau()) << '\n'
     << "seed " << instance.seed() << '\n'
     << "data\n";
  for (Index i = 0; i < instance.size(); ++i) write_row(os, instance.S().row(i));
}

LassoInstance read_lasso(std::istream& is) {
  const Header h = read_header(is);
  require_kind(h, "lasso");
  const auto m = parse_integer<Index>(field(h, "m"));
  const auto n = parse_integer<Index>(field(h, "n"));
  const double rho = parse_double(field(h, "rho"));
  const auto seed = parse_integer<std::uint64_t>(field(h, "seed"));
  if (m <= 0 || n <= 0) throw std::runtime_error("container dimensions must be positive");
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = read_value(is);
  Vector b(m);
  for (Index i = 0; i < m; ++i) b[i] = read_value(is);
  return LassoInstance(std::move(A), std::move(b), rho, seed);
}

CovselInstance read_covsel(std::istream& is) {
  const Header h = read_header(is);
  require_kind(h, "covsel");
  const auto n = parse_integer<Index>(field(h, "n"));
  const double tau = parse_double(field(h, "tau"));
  const auto seed = parse_integer<std::uint64_t>(field(h, "seed"));
  if (n <= 0) throw std::runtime_error("container dimensions must be positive");
  Matrix S(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) S(i, j) = read_value(is);
  return CovselInstance(std::move(S), tau, seed);
}

InstanceKind peek_instance_kind(const std::filesystem::path& path) {
  return with_path(path, [&] {
    std::ifstream is = open_in(path);
    const std::string& kind = field(read_header(is), "kind");
    if (kind == "lasso") return InstanceKind::lasso;
    if (kind == "covsel") return InstanceKind::covsel;
    throw std::runtime_error("unknown instance kind '" + kind + "'");
  });
}

void save_instance(const std::filesystem::path& path, const LassoInstance& instance) {
  std::ofstream os = open_out(path);
  write_instance(os, instance);
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void save_instance(const std::filesystem::path& path, const CovselInstance& instance) {
  std::ofstream os = open_out(path);
  write_instance(os, instance);
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

LassoInstance load_lasso(const std::filesystem::path& path) {
  return with_path(path, [&] {
    std::ifstream is = open_in(path);
    return read_lasso(is);
  });
}

CovselInstance load_covsel(const std::filesystem::path& path) {
  return with_path(path, [&] {
    std::ifstream is = open_in(path);
    return read_covsel(is);
  });
}

}  // namespace oradmm
