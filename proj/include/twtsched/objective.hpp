#ifndef TWTSCHED_OBJECTIVE_HPP
#define TWTSCHED_OBJECTIVE_HPP

#include <stdexcept>

#include "twtsched/energy.hpp"
#include "twtsched/model.hpp"

// Objective evaluation shared by every solver: the weighted sum of the
// normalized rejection cost and the normalized order-dependent energy of
// the accepted sequence.

namespace twtsched {

inline double rejection_cost(const Instance& in, const Schedule& sched) {
    if (in.txs.empty()) return 0.0;
    NormalizationContext ctx = normalize(in);
    double sum = 0.0;
    for (TxId id : sched.rejected) {
        const TransmissionRequest* tx = in.find_tx(id);
        if (!tx) throw std::invalid_argument("rejected entry for unknown tx");
        sum += ctx.p_hat(tx->priority);
    }
    return sum;
}

// Normalized energy term: the sum over accepted entries of e_hat, with the
// predecessor of the first entry being the virtual sequence head (end time
// zero, no station).
inline double schedule_energy_hat(const CostModel& model, const Schedule& sched) {
    double raw = 0.0;
    Micros prev_end = 0;
    StaId prev_sta = CostModel::kNoSta;
    for (const auto& e : sched.accepted) {
        const TransmissionRequest* tx = model.instance().find_tx(e.tx_id);
        if (!tx) throw std::invalid_argument("accepted entry for unknown tx");
        raw += model.cost_j(prev_end, e.start_time_us, *tx, prev_sta);
        prev_end = e.end_time_us;
        prev_sta = tx->sta_id;
    }
    return model.ctx().e_hat(raw);
}

inline double schedule_objective(const Instance& in, const Schedule& sched, double beta) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0,1]");
    auto rep = check_schedule_feasibility(in, sched);
    if (!rep.empty())
        throw std::invalid_argument("infeasible schedule: " + rep.front().str());
    if (in.txs.empty()) return 0.0;
    CostModel model(in);
    return beta * rejection_cost(in, sched) + (1.0 - beta) * schedule_energy_hat(model, sched);
}

}  // namespace twtsched

#endif
