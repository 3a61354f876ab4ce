#include "rbsim/spin_boson.hpp"

#include <stdexcept>

namespace rbsim::spin_boson {

SpinBosonModel SpinBosonModel::single_qubit(double g, double omega, int cutoff, double dt) {
    SpinBosonModel m;
    m.n_qubits = 1;
    m.env = EnvSpace::single(omega, cutoff);
    m.g = {{g}};
    m.dt = dt;
    return m;
}

void validate(const SpinBosonModel& model) {
    if (model.n_qubits < 1) throw std::invalid_argument("SpinBosonModel: n_qubits must be >= 1");
    if (!(model.dt > 0)) throw std::invalid_argument("SpinBosonModel: dt must be > 0");
    fock::validate(model.env);
    if (model.g.size() != model.env.modes.size())
        throw std::invalid_argument("SpinBosonModel: coupling rows must match mode count");
    for (const auto& row : model.g)
        if (row.size() != std::size_t(model.n_qubits))
            throw std::invalid_argument("SpinBosonModel: coupling cols must match qubit count");
}

int weight(ProjectorLabel p, int n_qubits) {
    int w = 0;
    for (int j = 0; j < n_qubits; ++j) w += (p >> j) & 1u ? -1 : 1;
    return w;
}

Mat block_hamiltonian(const SpinBosonModel& model, ProjectorLabel p) {
    validate(model);
    Mat H = Mat::Zero(model.env.dim(), model.env.dim());
    for (std::size_t i = 0; i < model.env.modes.size(); ++i) {
        auto ops = fock::build_mode_ops(model.env.modes[i].cutoff);
        double coupling = 0;
        for (int j = 0; j < model.n_qubits; ++j)
            coupling += model.g[i][j] * ((p >> j) & 1u ? -1.0 : 1.0);
        H += model.env.modes[i].omega * fock::tensor_embed(ops.n, i, model.env);
        if (coupling != 0.0) H += coupling * fock::tensor_embed(ops.x, i, model.env);
    }
    return H;
}

EvolutionBlocks evolution_blocks(const SpinBosonModel& model) {
    validate(model);
    EvolutionBlocks blocks;
    const ProjectorLabel count = ProjectorLabel(1) << model.n_qubits;
    blocks.E.reserve(count);
    for (ProjectorLabel p = 0; p < count; ++p)
        blocks.E.push_back(fock::expm_herm(block_hamiltonian(model, p), model.dt));
    return blocks;
}

Mat joint_step_unitary(const SpinBosonModel& model) {
    return joint_step_unitary(model, evolution_blocks(model));
}

Mat joint_step_unitary(const SpinBosonModel& model, const EvolutionBlocks& blocks) {
    const Eigen::Index d = model.d();
    const Eigen::Index dim = model.env.dim();
    Mat U = Mat::Zero(d * dim, d * dim);
    for (Eigen::Index p = 0; p < d; ++p)
        U.block(p * dim, p * dim, dim, dim) = blocks.E[std::size_t(p)];
    return U;
}

Mat delta_cos_op(const SpinBosonModel& model) {
    if (model.n_qubits != 1)
        throw std::invalid_argument("delta_cos_op: closed form is single-qubit only");
    Mat diff = block_hamiltonian(model, 0) - block_hamiltonian(model, 1);
    const double dt = model.dt;
    return fock::herm_func(diff, [dt](double l) { return fock::cd(std::cos(dt * l), 0); });
}

}  // namespace rbsim::spin_boson
