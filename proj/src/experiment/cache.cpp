#include <array>
#include <atomic>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "chainecho/errors.hpp"
#include "chainecho/experiment.hpp"

namespace chainecho {

namespace {

// Layout: magic, version, scalar tag, has-momenta flag, N (int64), energies,
// phi, psi (column-major), momenta (int32), then FNV-1a of everything before.
constexpr std::array<char, 4> kMagic{'C', 'E', 'M', 'B'};
constexpr std::uint8_t kVersion = 1;

std::uint64_t fnv1a(const std::string &bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
public:
  template <typename T> void put(const T &v) {
    buf_.append(reinterpret_cast<const char *>(&v), sizeof(T));
  }
  template <typename T> void put_array(const T *data, Index count) {
    buf_.append(reinterpret_cast<const char *>(data), static_cast<std::size_t>(count) * sizeof(T));
  }
  std::string finish() {
    const std::uint64_t sum = fnv1a(buf_);
    put(sum);
    return std::move(buf_);
  }

private:
  std::string buf_;
};

class Parser {
public:
  explicit Parser(std::string bytes) : buf_(std::move(bytes)) {
    if (buf_.size() < sizeof(std::uint64_t))
      throw Error("truncated basis file");
    const std::size_t body = buf_.size() - sizeof(std::uint64_t);
    std::uint64_t stored = 0;
    std::memcpy(&stored, buf_.data() + body, sizeof stored);
    buf_.resize(body);
    if (fnv1a(buf_) != stored)
      throw Error("checksum mismatch");
  }

  template <typename T> T get() {
    T v;
    take(&v, sizeof(T));
    return v;
  }
  template <typename T> void get_array(T *data, Index count) {
    take(data, static_cast<std::size_t>(count) * sizeof(T));
  }
  bool done() const { return pos_ == buf_.size(); }

private:
  void take(void *out, std::size_t n) {
    if (pos_ + n > buf_.size())
      throw Error("truncated basis file");
    std::memcpy(out, buf_.data() + pos_, n);
    pos_ += n;
  }

  std::string buf_;
  std::size_t pos_ = 0;
};

template <typename Scalar> std::string encode(const ModeBasis<Scalar> &b) {
  Writer w;
  w.put_array(kMagic.data(), 4);
  w.put(kVersion);
  w.put(static_cast<std::uint8_t>(std::is_same_v<Scalar, Complex> ? 1 : 0));
  w.put(static_cast<std::uint8_t>(b.momenta ? 1 : 0));
  const auto n = static_cast<std::int64_t>(b.size());
  w.put(n);
  w.put_array(b.energies.data(), n);
  w.put_array(b.phi.data(), n * n);
  w.put_array(b.psi.data(), n * n);
  if (b.momenta) {
    for (Index k = 0; k < n; ++k)
      w.put(static_cast<std::int32_t>((*b.momenta)(k)));
  }
  return w.finish();
}

template <typename Scalar> ModeBasis<Scalar> decode(std::string bytes) {
  Parser p(std::move(bytes));
  std::array<char, 4> magic{};
  p.get_array(magic.data(), 4);
  if (magic != kMagic)
    throw Error("not a basis file");
  if (p.get<std::uint8_t>() != kVersion)
    throw Error("unsupported basis file version");
  const bool complex = p.get<std::uint8_t>() == 1;
  if (complex != std::is_same_v<Scalar, Complex>)
    throw Error("basis file holds the wrong scalar type");
  const bool has_momenta = p.get<std::uint8_t>() == 1;
  const auto n = p.get<std::int64_t>();
  if (n < 1 || n > 100000)
    throw Error("implausible basis size");
  ModeBasis<Scalar> b;
  b.energies.resize(n);
  b.phi.resize(n, n);
  b.psi.resize(n, n);
  p.get_array(b.energies.data(), n);
  p.get_array(b.phi.data(), n * n);
  p.get_array(b.psi.data(), n * n);
  if (has_momenta) {
    Eigen::VectorXi m(n);
    for (Index k = 0; k < n; ++k)
      m(k) = p.get<std::int32_t>();
    b.momenta = m;
  }
  if (!p.done())
    throw Error("trailing bytes in basis file");
  return b;
}

void write_atomically(const std::filesystem::path &path, const std::string &bytes) {
  static std::atomic<unsigned> counter{0};
  static const unsigned salt = std::random_device{}();
  std::ostringstream suffix;
  suffix << ".tmp." << salt << '.' << counter++;
  const std::filesystem::path tmp = path.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
      throw Error("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Scalar, typename Compute>
ModeBasis<Scalar> cached(const std::optional<std::filesystem::path> &dir, const std::string &key,
                         Index expected_size, bool *hit, Compute &&compute) {
  if (hit)
    *hit = false;
  if (!dir)
    return compute();
  const std::filesystem::path path = *dir / (key + ".basis");
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      ModeBasis<Scalar> b = decode<Scalar>(slurp(path));
      if (b.size() != expected_size)
        throw Error("basis size does not match the chain");
      if (hit)
        *hit = true;
      return b;
    } catch (const Error &e) {
      std::cerr << "warning: cache entry " << path.string() << " unusable (" << e.what()
                << "); recomputing\n";
    }
  }
  ModeBasis<Scalar> b = compute();
  try {
    std::filesystem::create_directories(*dir);
    write_atomically(path, encode(b));
  } catch (const std::exception &e) {
    std::cerr << "warning: could not store cache entry " << path.string() << " (" << e.what()
              << ")\n";
  }
  return b;
}

ChainSpec normalized(const ChainSpec &spec) {
  ChainSpec s = spec;
  if (s.label == QubitLabel::L00) {
    s.coupling = 0.0;
    s.site_b = 0;
  }
  return s;
}

} // namespace

void write_basis(const std::filesystem::path &path, const ModeBasis<double> &basis) {
  write_atomically(path, encode(basis));
}

void write_basis(const std::filesystem::path &path, const ModeBasis<Complex> &basis) {
  write_atomically(path, encode(basis));
}

ModeBasis<double> read_basis_real(const std::filesystem::path &path) {
  return decode<double>(slurp(path));
}

ModeBasis<Complex> read_basis_complex(const std::filesystem::path &path) {
  return decode<Complex>(slurp(path));
}

BasisCache::BasisCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

ModeBasis<double> BasisCache::modes(const ChainSpec &spec, bool *hit) const {
  const ChainSpec s = normalized(spec);
  return cached<double>(dir_, cache_key(s), s.n_sites, hit,
                        [&] { return diagonalize(build_hamiltonian(s)); });
}

ModeBasis<Complex> BasisCache::momentum(const ChainSpec &spec, bool *hit) const {
  const ChainSpec s = normalized(spec.with_label(QubitLabel::L00));
  return cached<Complex>(dir_, cache_key(s) + "_momentum", s.n_sites, hit,
                         [&] { return momentum_modes(s); });
}

} // namespace chainecho
