#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pddm/environment.hpp"
#include "pddm/rng.hpp"

namespace pddm {

namespace {

// pulls named constants out of a config override map and complains about
// anything it does not recognize (typos should fail loudly, not silently run
// the default physics)
class ParamReader {
 public:
  ParamReader(std::string env_name, const std::map<std::string, double>& overrides)
      : env_name_(std::move(env_name)), overrides_(overrides) {}

  double Get(const std::string& key, double default_value) {
    known_.insert(key);
    auto it = overrides_.find(key);
    return it == overrides_.end() ? default_value : it->second;
  }

  void Finish() const {
    for (const auto& [key, value] : overrides_) {
      if (!known_.count(key)) {
        std::ostringstream msg;
        msg << env_name_ << ": unknown parameter '" << key << "'; known parameters:";
        for (const std::string& k : known_) msg << " " << k;
        throw std::invalid_argument(msg.str());
      }
    }
  }

 private:
  std::string env_name_;
  const std::map<std::string, double>& overrides_;
  std::set<std::string> known_;
};

Eigen::VectorXd Vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// ----- pendulum ----- //
// torque-limited swing-up. raw state (theta, omega) with theta = 0 hanging
// down and theta = pi upright; observation (sin theta, cos theta, omega).
class PendulumEnv : public Environment {
 public:
  explicit PendulumEnv(const std::map<std::string, double>& overrides) {
    ParamReader p("pendulum", overrides);
    mass_ = p.Get("mass", 1.0);
    length_ = p.Get("length", 1.0);
    gravity_ = p.Get("gravity", 9.81);
    damping_ = p.Get("damping", 0.0);
    max_torque_ = p.Get("max_torque", 6.0);
    dt_ = p.Get("dt", 0.05);
    angle_weight_ = p.Get("reward_angle_weight", 1.0);
    velocity_weight_ = p.Get("reward_velocity_weight", 0.1);
    action_weight_ = p.Get("reward_action_weight", 0.01);
    reset_angle_range_ = p.Get("reset_angle_range", 0.1);
    reset_velocity_range_ = p.Get("reset_velocity_range", 0.05);
    p.Finish();
  }

  std::string Name() const override { return "pendulum"; }
  int StateDim() const override { return 3; }
  int ActionDim() const override { return 1; }
  double Dt() const override { return dt_; }
  int SuccessHoldSteps() const override { return 10; }

  double Reward(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const override {
    double theta = std::atan2(s[0], s[1]);
    double d = AngularDistance(theta, M_PI);
    return -angle_weight_ * d * d - velocity_weight_ * s[2] * s[2] -
           action_weight_ * a.squaredNorm();
  }

  bool Success(const Eigen::VectorXd& s) const override {
    return AngularDistance(std::atan2(s[0], s[1]), M_PI) < 0.25;
  }

  Eigen::VectorXd Reset(uint64_t seed) override {
    Rng rng(seed);
    double theta = rng.Uniform(-reset_angle_range_, reset_angle_range_);
    double omega = rng.Uniform(-reset_velocity_range_, reset_velocity_range_);
    StartEpisode(Vec({theta, omega}));
    return state_;
  }

  // total mechanical energy with the hanging state as zero; used by tests to
  // audit the integrator
  double Energy(const Eigen::VectorXd& s) const {
    double theta = std::atan2(s[0], s[1]);
    double omega = s[2];
    return 0.5 * mass_ * length_ * length_ * omega * omega +
           mass_ * gravity_ * length_ * (1.0 - std::cos(theta));
  }

 protected:
  Eigen::VectorXd RawStep(const Eigen::VectorXd& raw, const Eigen::VectorXd& a) const override {
    double theta = raw[0], omega = raw[1];
    double inertia = mass_ * length_ * length_;
    double torque = a[0] * max_torque_;
    double alpha = (-gravity_ / length_) * std::sin(theta) + (torque - damping_ * omega) / inertia;
    double omega_next = omega + dt_ * alpha;
    double theta_next = theta + dt_ * omega_next;
    return Vec({theta_next, omega_next});
  }

  Eigen::VectorXd Encode(const Eigen::VectorXd& raw) const override {
    return Vec({std::sin(raw[0]), std::cos(raw[0]), raw[1]});
  }

  Eigen::VectorXd Decode(const Eigen::VectorXd& obs) const override {
    return Vec({std::atan2(obs[0], obs[1]), obs[2]});
  }

 private:
  double mass_, length_, gravity_, damping_, max_torque_, dt_;
  double angle_weight_, velocity_weight_, action_weight_;
  double reset_angle_range_, reset_velocity_range_;
};

// ----- cartpole ----- //
// swing-up variant: the pole starts hanging and the cart runs on a bounded
// rail. raw state (x, xdot, theta, omega) with theta = 0 upright; observation
// (x, xdot, sin theta, cos theta, omega). leaving the rail is a failure.
class CartpoleEnv : public Environment {
 public:
  explicit CartpoleEnv(const std::map<std::string, double>& overrides) {
    ParamReader p("cartpole", overrides);
    cart_mass_ = p.Get("cart_mass", 1.0);
    pole_mass_ = p.Get("pole_mass", 0.1);
    pole_half_length_ = p.Get("pole_half_length", 0.5);
    gravity_ = p.Get("gravity", 9.81);
    force_mag_ = p.Get("force_mag", 10.0);
    x_limit_ = p.Get("x_limit", 2.4);
    failure_penalty_ = p.Get("failure_penalty", -100.0);
    dt_ = p.Get("dt", 0.05);
    angle_weight_ = p.Get("reward_angle_weight", 1.0);
    position_weight_ = p.Get("reward_position_weight", 0.1);
    velocity_weight_ = p.Get("reward_velocity_weight", 0.1);
    action_weight_ = p.Get("reward_action_weight", 0.01);
    p.Finish();
  }

  std::string Name() const override { return "cartpole"; }
  int StateDim() const override { return 5; }
  int ActionDim() const override { return 1; }
  double Dt() const override { return dt_; }
  int SuccessHoldSteps() const override { return 10; }
  double FailurePenalty() const override { return failure_penalty_; }

  double Reward(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const override {
    double theta = std::atan2(s[2], s[3]);
    double d = AngularDistance(theta, 0.0);
    return -angle_weight_ * d * d - position_weight_ * s[0] * s[0] -
           velocity_weight_ * s[4] * s[4] - action_weight_ * a.squaredNorm();
  }

  bool Success(const Eigen::VectorXd& s) const override {
    return AngularDistance(std::atan2(s[2], s[3]), 0.0) < 0.25;
  }

  bool Failure(const Eigen::VectorXd& s) const override { return std::abs(s[0]) > x_limit_; }

  Eigen::VectorXd Reset(uint64_t seed) override {
    Rng rng(seed);
    double x = rng.Uniform(-0.05, 0.05);
    double xdot = rng.Uniform(-0.05, 0.05);
    double theta = M_PI + rng.Uniform(-0.1, 0.1);
    double omega = rng.Uniform(-0.05, 0.05);
    StartEpisode(Vec({x, xdot, theta, omega}));
    return state_;
  }

 protected:
  Eigen::VectorXd RawStep(const Eigen::VectorXd& raw, const Eigen::VectorXd& a) const override {
    double x = raw[0], xdot = raw[1], theta = raw[2], omega = raw[3];
    double force = a[0] * force_mag_;
    double total_mass = cart_mass_ + pole_mass_;
    double sin_t = std::sin(theta), cos_t = std::cos(theta);
    double temp =
        (force + pole_mass_ * pole_half_length_ * omega * omega * sin_t) / total_mass;
    double theta_dd = (gravity_ * sin_t - cos_t * temp) /
                      (pole_half_length_ * (4.0 / 3.0 - pole_mass_ * cos_t * cos_t / total_mass));
    double x_dd = temp - pole_mass_ * pole_half_length_ * theta_dd * cos_t / total_mass;
    double omega_next = omega + dt_ * theta_dd;
    double theta_next = theta + dt_ * omega_next;
    double xdot_next = xdot + dt_ * x_dd;
    double x_next = x + dt_ * xdot_next;
    return Vec({x_next, xdot_next, theta_next, omega_next});
  }

  Eigen::VectorXd Encode(const Eigen::VectorXd& raw) const override {
    return Vec({raw[0], raw[1], std::sin(raw[2]), std::cos(raw[2]), raw[3]});
  }

  Eigen::VectorXd Decode(const Eigen::VectorXd& obs) const override {
    return Vec({obs[0], obs[1], std::atan2(obs[2], obs[3]), obs[4]});
  }

 private:
  double cart_mass_, pole_mass_, pole_half_length_, gravity_, force_mag_, x_limit_;
  double failure_penalty_, dt_;
  double angle_weight_, position_weight_, velocity_weight_, action_weight_;
};

// ----- two-link reacher ----- //
// planar arm (no gravity), point masses at the link tips, viscous joint
// damping, torque-controlled. raw state (q1, q2, w1, w2, gx, gy); observation
// (sin q1, cos q1, sin q2, cos q2, w1, w2, gx, gy). the goal point rides along
// in the state so reward stays a pure function of (state, action).
class Reacher2Env : public Environment {
 public:
  explicit Reacher2Env(const std::map<std::string, double>& overrides) {
    ParamReader p("reacher2", overrides);
    link_mass_ = p.Get("link_mass", 1.0);
    link_length_ = p.Get("link_length", 0.5);
    torque_scale_ = p.Get("torque_scale", 5.0);
    damping_ = p.Get("damping", 0.5);
    dt_ = p.Get("dt", 0.05);
    goal_radius_min_ = p.Get("goal_radius_min", 0.2);
    goal_radius_max_ = p.Get("goal_radius_max", 0.9);
    distance_weight_ = p.Get("reward_distance_weight", 1.0);
    action_weight_ = p.Get("reward_action_weight", 0.01);
    success_distance_ = p.Get("success_distance", 0.05);
    p.Finish();
  }

  std::string Name() const override { return "reacher2"; }
  int StateDim() const override { return 8; }
  int ActionDim() const override { return 2; }
  double Dt() const override { return dt_; }

  double Reward(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const override {
    return -distance_weight_ * TipDistance(s) - action_weight_ * a.squaredNorm();
  }

  bool Success(const Eigen::VectorXd& s) const override {
    return TipDistance(s) < success_distance_;
  }

  Eigen::VectorXd Reset(uint64_t seed) override {
    Rng rng(seed);
    double q1 = rng.Uniform(-M_PI, M_PI);
    double q2 = rng.Uniform(-M_PI, M_PI);
    double goal_angle = rng.Uniform(-M_PI, M_PI);
    double goal_radius = rng.Uniform(goal_radius_min_, goal_radius_max_) * 2.0 * link_length_;
    StartEpisode(Vec({q1, q2, 0.0, 0.0, goal_radius * std::cos(goal_angle),
                      goal_radius * std::sin(goal_angle)}));
    return state_;
  }

  double TipDistance(const Eigen::VectorXd& s) const {
    double q1 = std::atan2(s[0], s[1]);
    double q12 = q1 + std::atan2(s[2], s[3]);
    double tip_x = link_length_ * std::cos(q1) + link_length_ * std::cos(q12);
    double tip_y = link_length_ * std::sin(q1) + link_length_ * std::sin(q12);
    double dx = tip_x - s[6], dy = tip_y - s[7];
    return std::sqrt(dx * dx + dy * dy);
  }

 protected:
  Eigen::VectorXd RawStep(const Eigen::VectorXd& raw, const Eigen::VectorXd& a) const override {
    double q1 = raw[0], q2 = raw[1], w1 = raw[2], w2 = raw[3];
    double m = link_mass_, l = link_length_;
    double c2 = std::cos(q2), s2 = std::sin(q2);

    // manipulator inertia matrix for point masses at the link tips
    double m11 = 2.0 * m * l * l + m * l * l + 2.0 * m * l * l * c2;
    double m12 = m * l * l + m * l * l * c2;
    double m22 = m * l * l;

    // coriolis/centrifugal terms
    double h = m * l * l * s2;
    double c1 = -h * (2.0 * w1 * w2 + w2 * w2);
    double c2_term = h * w1 * w1;

    double tau1 = a[0] * torque_scale_ - damping_ * w1 - c1;
    double tau2 = a[1] * torque_scale_ - damping_ * w2 - c2_term;

    double det = m11 * m22 - m12 * m12;
    double a1 = (m22 * tau1 - m12 * tau2) / det;
    double a2 = (-m12 * tau1 + m11 * tau2) / det;

    double w1_next = w1 + dt_ * a1;
    double w2_next = w2 + dt_ * a2;
    double q1_next = q1 + dt_ * w1_next;
    double q2_next = q2 + dt_ * w2_next;
    return Vec({q1_next, q2_next, w1_next, w2_next, raw[4], raw[5]});
  }

  Eigen::VectorXd Encode(const Eigen::VectorXd& raw) const override {
    return Vec({std::sin(raw[0]), std::cos(raw[0]), std::sin(raw[1]), std::cos(raw[1]), raw[2],
                raw[3], raw[4], raw[5]});
  }

  Eigen::VectorXd Decode(const Eigen::VectorXd& obs) const override {
    return Vec({std::atan2(obs[0], obs[1]), std::atan2(obs[2], obs[3]), obs[4], obs[5], obs[6],
                obs[7]});
  }

 private:
  double link_mass_, link_length_, torque_scale_, damping_, dt_;
  double goal_radius_min_, goal_radius_max_;
  double distance_weight_, action_weight_, success_distance_;
};

// ----- toy valve ----- //
// single rotational joint driven by two finger torques through a viscous
// contact. raw state (phi, omega, target); observation (sin phi, cos phi,
// omega, sin target, cos target). the target angle is drawn uniformly from
// [-pi, pi] at every reset. reward is a coarse distance term plus two
// concentric bonuses (strict inequalities at both thresholds).
class ToyValveEnv : public Environment {
 public:
  static constexpr double kCoarseWeight = 10.0;
  static constexpr double kCoarseThreshold = 0.25;
  static constexpr double kCoarseBonus = 1.0;
  static constexpr double kFineThreshold = 0.1;
  static constexpr double kFineBonus = 10.0;

  explicit ToyValveEnv(const std::map<std::string, double>& overrides) {
    ParamReader p("toy_valve", overrides);
    inertia_ = p.Get("inertia", 1.0);
    damping_ = p.Get("damping", 2.0);
    torque_scale_ = p.Get("torque_scale", 8.0);
    dt_ = p.Get("dt", 0.15);
    reset_angle_range_ = p.Get("reset_angle_range", 0.1);
    p.Finish();
  }

  std::string Name() const override { return "toy_valve"; }
  int StateDim() const override { return 5; }
  int ActionDim() const override { return 2; }
  double Dt() const override { return dt_; }

  // reward as a function of |phi - target|; exposed so the threshold
  // conventions can be pinned down exactly in tests
  static double RewardFromDistance(double d) {
    double r = -kCoarseWeight * d;
    if (d < kCoarseThreshold) r += kCoarseBonus;
    if (d < kFineThreshold) r += kFineBonus;
    return r;
  }

  double Reward(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const override {
    (void)a;  // no action penalty: the task only scores tracking
    return RewardFromDistance(Distance(s));
  }

  bool Success(const Eigen::VectorXd& s) const override { return Distance(s) < kFineThreshold; }

  Eigen::VectorXd Reset(uint64_t seed) override {
    Rng rng(seed);
    double phi = rng.Uniform(-reset_angle_range_, reset_angle_range_);
    double target = rng.Uniform(-M_PI, M_PI);
    StartEpisode(Vec({phi, 0.0, target}));
    return state_;
  }

  double Distance(const Eigen::VectorXd& s) const {
    return AngularDistance(std::atan2(s[0], s[1]), std::atan2(s[3], s[4]));
  }

 protected:
  Eigen::VectorXd RawStep(const Eigen::VectorXd& raw, const Eigen::VectorXd& a) const override {
    double phi = raw[0], omega = raw[1];
    double torque = torque_scale_ * 0.5 * (a[0] + a[1]);
    double alpha = (torque - damping_ * omega) / inertia_;
    double omega_next = omega + dt_ * alpha;
    double phi_next = phi + dt_ * omega_next;
    return Vec({phi_next, omega_next, raw[2]});
  }

  Eigen::VectorXd Encode(const Eigen::VectorXd& raw) const override {
    return Vec({std::sin(raw[0]), std::cos(raw[0]), raw[1], std::sin(raw[2]), std::cos(raw[2])});
  }

  Eigen::VectorXd Decode(const Eigen::VectorXd& obs) const override {
    return Vec({std::atan2(obs[0], obs[1]), obs[2], std::atan2(obs[3], obs[4])});
  }

 private:
  double inertia_, damping_, torque_scale_, dt_, reset_angle_range_;
};

}  // namespace

double ToyValveRewardFromDistance(double distance) {
  return ToyValveEnv::RewardFromDistance(distance);
}

std::unique_ptr<Environment> MakeEnvironment(const std::string& name,
                                             const std::map<std::string, double>& overrides) {
  if (name == "pendulum") return std::make_unique<PendulumEnv>(overrides);
  if (name == "cartpole") return std::make_unique<CartpoleEnv>(overrides);
  if (name == "reacher2") return std::make_unique<Reacher2Env>(overrides);
  if (name == "toy_valve") return std::make_unique<ToyValveEnv>(overrides);
  std::ostringstream msg;
  msg << "unknown environment '" << name << "'; available:";
  for (const std::string& n : EnvironmentNames()) msg << " " << n;
  throw std::invalid_argument(msg.str());
}

std::vector<std::string> EnvironmentNames() {
  return {"pendulum", "cartpole", "reacher2", "toy_valve"};
}

}  // namespace pddm
