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

#ifndef UPOSI_ENVS_PLANAR_CHAIN_H_
#define UPOSI_ENVS_PLANAR_CHAIN_H_

#include <vector>

#include <Eigen/Core>

#include "uposi/types.h"

namespace uposi {

using Vec2 = Eigen::Vector2d;

// Rigid planar multibody system: a carriage translating along fixed world
// axes (prismatic dofs) carrying a tree of revolute links. Generalized
// coordinates are ordered [prismatic..., one angle per link]. A link's
// absolute angle is its parent's absolute angle plus its joint angle plus a
// constant offset; in the link frame, angle 0 leaves the axes aligned with
// the world (x right, y up).
//
// Equations of motion use Kane's form,
//   M(q) qdd = tau + sum_b J_b^T (m_b g - m_b Jdot_b qd) + extra forces,
// with M = sum_b (m_b J_b^T J_b + I_b Jw_b^T Jw_b).
class PlanarChain {
 public:
  struct Link {
    int parent = -1;  // -1: attached to the carriage
    Vec2 joint = Vec2::Zero();  // joint location in the parent frame
    double angle_offset = 0.0;
  };
  struct Body {
    int link = -1;  // -1: the carriage itself
    Vec2 com = Vec2::Zero();  // center of mass in the link frame
    double mass = 0.0;
    double inertia = 0.0;  // about the center of mass
  };
  // Positions, angles and angular rates of every link at one configuration.
  struct Kinematics {
    Vec2 carriage = Vec2::Zero();
    Vec2 carriage_velocity = Vec2::Zero();
    std::vector<double> angle;
    std::vector<double> omega;
    std::vector<Vec2> joint_position;
  };

  PlanarChain(std::vector<Vec2> prismatic_axes, Vec2 origin,
              std::vector<Link> links, std::vector<Body> bodies,
              double gravity);

  int dofs() const { return num_prismatic() + num_links(); }
  int num_prismatic() const { return static_cast<int>(axes_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }
  std::vector<Body>& bodies() { return bodies_; }
  const std::vector<Body>& bodies() const { return bodies_; }

  Kinematics Kinematic(const Vector& q, const Vector& qd) const;

  // World position, velocity, Jacobian (2 x dofs) and velocity-product
  // acceleration Jdot qd of a point given in a link frame (-1: carriage).
  Vec2 PointPosition(const Kinematics& k, int link, const Vec2& local) const;
  Vec2 PointVelocity(const Kinematics& k, int link, const Vec2& local) const;
  Eigen::Matrix<double, 2, Eigen::Dynamic> PointJacobian(
      const Kinematics& k, int link, const Vec2& local) const;
  Vec2 PointBiasAcceleration(const Kinematics& k, int link,
                             const Vec2& local) const;

  Matrix MassMatrix(const Kinematics& k) const;
  // Generalized gravity plus velocity-product forces (right-hand side with
  // zero actuation).
  Vector BiasForces(const Kinematics& k) const;

  double KineticEnergy(const Kinematics& k) const;
  double PotentialEnergy(const Kinematics& k) const;

  // Solves M qdd = tau + bias for qdd.
  Vector Accelerations(const Vector& q, const Vector& qd,
                       const Vector& tau) const;

 private:
  // Revolute dofs (as link indices) from the carriage down to `link`.
  const std::vector<int>& Chain(int link) const { return chains_[link]; }
  int LinkDof(int link) const { return num_prismatic() + link; }

  std::vector<Vec2> axes_;
  Vec2 origin_;
  std::vector<Link> links_;
  std::vector<Body> bodies_;
  double gravity_;
  std::vector<std::vector<int>> chains_;
};

// Advances (q, qd) by one semi-implicit Euler step:
//   qd' = qd + dt qdd,  q' = q + dt qd'.
void SemiImplicitEuler(Vector& q, Vector& qd, const Vector& qdd, double dt);

}  // namespace uposi

#endif  // UPOSI_ENVS_PLANAR_CHAIN_H_
