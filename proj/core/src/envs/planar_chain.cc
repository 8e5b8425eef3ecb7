// Copyright 2026 The uposi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uposi/envs/planar_chain.h"

#include <cmath>

#include <Eigen/Cholesky>

#include "uposi/error.h"

namespace uposi {
namespace {

Vec2 Rotate(double angle, const Vec2& v) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Vec2 Perp(const Vec2& v) { return {-v.y(), v.x()}; }

}  // namespace

PlanarChain::PlanarChain(std::vector<Vec2> prismatic_axes, Vec2 origin,
                         std::vector<Link> links, std::vector<Body> bodies,
                         double gravity)
    : axes_(std::move(prismatic_axes)),
      origin_(origin),
      links_(std::move(links)),
      bodies_(std::move(bodies)),
      gravity_(gravity) {
  chains_.resize(links_.size());
  for (int l = 0; l < num_links(); ++l) {
    const int parent = links_[l].parent;
    if (parent >= l) {
      throw ConfigError("planar chain links must be listed parents first");
    }
    if (parent >= 0) chains_[l] = chains_[parent];
    chains_[l].push_back(l);
  }
  for (const Body& b : bodies_) {
    if (b.link >= num_links()) throw ConfigError("body on unknown link");
  }
}

PlanarChain::Kinematics PlanarChain::Kinematic(const Vector& q,
                                               const Vector& qd) const {
  Kinematics k;
  k.carriage = origin_;
  for (int i = 0; i < num_prismatic(); ++i) {
    k.carriage += axes_[i] * q[i];
    k.carriage_velocity += axes_[i] * qd[i];
  }
  k.angle.resize(num_links());
  k.omega.resize(num_links());
  k.joint_position.resize(num_links());
  for (int l = 0; l < num_links(); ++l) {
    const Link& link = links_[l];
    const double parent_angle = link.parent < 0 ? 0.0 : k.angle[link.parent];
    const double parent_omega = link.parent < 0 ? 0.0 : k.omega[link.parent];
    const Vec2 parent_origin =
        link.parent < 0 ? k.carriage : k.joint_position[link.parent];
    k.angle[l] = parent_angle + q[LinkDof(l)] + link.angle_offset;
    k.omega[l] = parent_omega + qd[LinkDof(l)];
    k.joint_position[l] = parent_origin + Rotate(parent_angle, link.joint);
  }
  return k;
}

Vec2 PlanarChain::PointPosition(const Kinematics& k, int link,
                                const Vec2& local) const {
  if (link < 0) return k.carriage + local;
  return k.joint_position[link] + Rotate(k.angle[link], local);
}

Vec2 PlanarChain::PointVelocity(const Kinematics& k, int link,
                                const Vec2& local) const {
  Vec2 v = k.carriage_velocity;
  if (link < 0) return v;
  const Vec2 p = PointPosition(k, link, local);
  const std::vector<int>& chain = Chain(link);
  for (size_t i = 0; i < chain.size(); ++i) {
    const int j = chain[i];
    const double rel_omega =
        k.omega[j] - (links_[j].parent < 0 ? 0.0 : k.omega[links_[j].parent]);
    v += rel_omega * Perp(p - k.joint_position[j]);
  }
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> PlanarChain::PointJacobian(
    const Kinematics& k, int link, const Vec2& local) const {
  Eigen::Matrix<double, 2, Eigen::Dynamic> jac =
      Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, dofs());
  for (int i = 0; i < num_prismatic(); ++i) jac.col(i) = axes_[i];
  if (link < 0) return jac;
  const Vec2 p = PointPosition(k, link, local);
  for (int j : Chain(link)) {
    jac.col(LinkDof(j)) = Perp(p - k.joint_position[j]);
  }
  return jac;
}

Vec2 PlanarChain::PointBiasAcceleration(const Kinematics& k, int link,
                                        const Vec2& local) const {
  Vec2 a = Vec2::Zero();
  if (link < 0) return a;
  const std::vector<int>& chain = Chain(link);
  const Vec2 p = PointPosition(k, link, local);
  for (size_t i = 0; i < chain.size(); ++i) {
    const int j = chain[i];
    const Vec2 end =
        i + 1 < chain.size() ? k.joint_position[chain[i + 1]] : p;
    a -= k.omega[j] * k.omega[j] * (end - k.joint_position[j]);
  }
  return a;
}

Matrix PlanarChain::MassMatrix(const Kinematics& k) const {
  Matrix m = Matrix::Zero(dofs(), dofs());
  for (const Body& b : bodies_) {
    const auto jac = PointJacobian(k, b.link, b.com);
    m.noalias() += b.mass * jac.transpose() * jac;
    if (b.link >= 0 && b.inertia > 0.0) {
      for (int i : Chain(b.link)) {
        for (int j : Chain(b.link)) m(LinkDof(i), LinkDof(j)) += b.inertia;
      }
    }
  }
  return m;
}

Vector PlanarChain::BiasForces(const Kinematics& k) const {
  Vector f = Vector::Zero(dofs());
  const Vec2 g(0.0, -gravity_);
  for (const Body& b : bodies_) {
    const auto jac = PointJacobian(k, b.link, b.com);
    f.noalias() += jac.transpose() *
                   (b.mass * (g - PointBiasAcceleration(k, b.link, b.com)));
  }
  return f;
}

double PlanarChain::KineticEnergy(const Kinematics& k) const {
  double e = 0.0;
  for (const Body& b : bodies_) {
    const Vec2 v = PointVelocity(k, b.link, b.com);
    e += 0.5 * b.mass * v.squaredNorm();
    if (b.link >= 0) e += 0.5 * b.inertia * k.omega[b.link] * k.omega[b.link];
  }
  return e;
}

double PlanarChain::PotentialEnergy(const Kinematics& k) const {
  double e = 0.0;
  for (const Body& b : bodies_) {
    e += b.mass * gravity_ * PointPosition(k, b.link, b.com).y();
  }
  return e;
}

Vector PlanarChain::Accelerations(const Vector& q, const Vector& qd,
                                  const Vector& tau) const {
  const Kinematics k = Kinematic(q, qd);
  return MassMatrix(k).ldlt().solve(tau + BiasForces(k));
}

void SemiImplicitEuler(Vector& q, Vector& qd, const Vector& qdd, double dt) {
  qd += dt * qdd;
  q += dt * qd;
}

}  // namespace uposi
