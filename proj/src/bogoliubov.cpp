#include "chainecho/bogoliubov.hpp"

#include <limits>

#include <Eigen/SVD>

#include "chainecho/errors.hpp"

namespace chainecho {

template <typename Scalar>
BogoliubovMap<Scalar> relate_bases(const ModeBasis<Scalar> &from, const ModeBasis<Scalar> &to,
                                   std::string source, std::string target) {
  if (from.size() != to.size())
    throw InvalidArgument("cannot relate mode bases of different sizes");
  const Matrix<Scalar> g0 = from.particle(), h0 = from.hole();
  const Matrix<Scalar> g1 = to.particle(), h1 = to.hole();

  BogoliubovMap<Scalar> map;
  map.g = g0 * g1.adjoint() + h0 * h1.adjoint();
  map.h = g0 * h1.transpose() + h0 * g1.transpose();
  map.kind = MapKind::Static;
  map.source = std::move(source);
  map.target = std::move(target);
  return map;
}

BogoliubovMap<Complex> relate_bases(const ModeBasis<Complex> &from, const ModeBasis<double> &to,
                                    std::string source, std::string target) {
  return relate_bases(from, to.cast<Complex>(), std::move(source), std::move(target));
}

template <typename Scalar>
BogoliubovMap<Scalar> compose(const BogoliubovMap<Scalar> &first,
                              const BogoliubovMap<Scalar> &second) {
  if (first.size() != second.size())
    throw InvalidArgument("cannot compose maps of different sizes");
  BogoliubovMap<Scalar> out;
  out.g = first.g * second.g + first.h * second.h.conjugate();
  out.h = first.g * second.h + first.h * second.g.conjugate();
  out.kind = (first.kind == MapKind::Static && second.kind == MapKind::Static) ? MapKind::Static
                                                                             : MapKind::Dynamic;
  out.source = first.source;
  out.target = second.target;
  return out;
}

template <typename Scalar>
BogoliubovMap<Complex> dynamic_map(const BogoliubovMap<Scalar> &map,
                                   const Vector<double> &target_energies, double t) {
  if (target_energies.size() != map.size())
    throw InvalidArgument("energy vector does not match map size");
  const Vector<Complex> phase =
      target_energies.unaryExpr([t](double e) { return std::polar(1.0, e * t); });

  const Matrix<Complex> g = map.g.template cast<Complex>();
  const Matrix<Complex> h = map.h.template cast<Complex>();
  const Matrix<Complex> g_e = g * phase.asDiagonal();
  const Matrix<Complex> h_ec = h * phase.conjugate().asDiagonal();

  BogoliubovMap<Complex> out;
  out.g.noalias() = g_e * g.adjoint();
  out.g.noalias() += h_ec * h.adjoint();
  out.h.noalias() = g_e * h.transpose();
  out.h.noalias() += h_ec * g.transpose();
  out.kind = MapKind::Dynamic;
  out.time = t;
  out.source = map.source;
  out.target = map.target + "(t)";
  return out;
}

BogoliubovMap<Complex> dynamic_map(const ModeBasis<Complex> &b0, const ModeBasis<double> &b1,
                                   double t) {
  return dynamic_map(relate_bases(b0, b1, "00", "10"), b1.energies, t);
}

Vector<double> RegularizedMap::regular_diagonal() const {
  Vector<double> d = singular;
  for (Index j : swapped)
    d(j) = 0.0;
  return d;
}

Matrix<double> RegularizedMap::pairing_matrix() const {
  return -g_swapped.partialPivLu().solve(h_swapped);
}

RegularizedMap svd_regularize(const BogoliubovMap<double> &map, double relative_threshold) {
  const Index n = map.size();
  Eigen::JacobiSVD<Matrix<double>> svd(map.g, Eigen::ComputeFullU | Eigen::ComputeFullV);

  RegularizedMap out;
  out.u = svd.matrixU();
  out.w = svd.matrixV();
  out.singular = svd.singularValues();
  out.h_rot = out.u.transpose() * map.h * out.w;
  out.threshold = relative_threshold * (n > 0 ? out.singular.maxCoeff() : 0.0);

  out.g_swapped = out.singular.asDiagonal();
  out.h_swapped = out.h_rot;
  for (Index j = 0; j < n; ++j) {
    if (out.singular(j) > out.threshold)
      continue;
    out.swapped.push_back(j);
    // xi0_j^+ = D_j xi1_j^+ + h_rot(j, :) xi1: particle and hole rows trade places.
    out.g_swapped.row(j) = out.h_rot.row(j);
    out.h_swapped.row(j).setZero();
    out.h_swapped(j, j) = out.singular(j);
  }
  return out;
}

double condition_number(const Matrix<double> &g) {
  if (g.size() == 0)
    return 1.0;
  Eigen::JacobiSVD<Matrix<double>> svd(g);
  const auto &s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0)
    return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

template BogoliubovMap<double> relate_bases(const ModeBasis<double> &, const ModeBasis<double> &,
                                            std::string, std::string);
template BogoliubovMap<Complex> relate_bases(const ModeBasis<Complex> &,
                                             const ModeBasis<Complex> &, std::string,
                                             std::string);
template BogoliubovMap<double> compose(const BogoliubovMap<double> &,
                                       const BogoliubovMap<double> &);
template BogoliubovMap<Complex> compose(const BogoliubovMap<Complex> &,
                                        const BogoliubovMap<Complex> &);
template BogoliubovMap<Complex> dynamic_map(const BogoliubovMap<double> &,
                                            const Vector<double> &, double);
template BogoliubovMap<Complex> dynamic_map(const BogoliubovMap<Complex> &,
                                            const Vector<double> &, double);

} // namespace chainecho
