#pragma once

#include <Eigen/Dense>

namespace blfquad {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using VecX = Eigen::VectorXd;

// Axis indices, used wherever per-axis quantities are stored in Vec3 order.
enum Axis : int { AXIS_X = 0, AXIS_Y = 1, AXIS_Z = 2 };
enum AttAxis : int { ATT_ROLL = 0, ATT_PITCH = 1, ATT_YAW = 2 };

}  // namespace blfquad
