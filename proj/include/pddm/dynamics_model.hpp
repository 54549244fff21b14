#ifndef PDDM_DYNAMICS_MODEL_H_
#define PDDM_DYNAMICS_MODEL_H_

#include <Eigen/Core>

namespace pddm {

// what a planner needs from a dynamics model: one or more members, each able
// to map a batch of (state, action) rows to next-state rows. implemented by
// the learned ensemble and by the ground-truth adapter, so planners cannot
// tell them apart.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual int NumMembers() const = 0;
  virtual int StateDim() const = 0;
  virtual int ActionDim() const = 0;

  // states (n x state_dim), actions (n x action_dim) -> next (n x state_dim).
  // must not mutate the model; rows are independent.
  virtual void PredictNextBatch(int member, const Eigen::MatrixXd& states,
                                const Eigen::MatrixXd& actions,
                                Eigen::MatrixXd& next_states) const = 0;
};

}  // namespace pddm

#endif  // PDDM_DYNAMICS_MODEL_H_
