#include "randutv/randutv_ab.hpp"

#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix_ops.hpp"

namespace randutv {

namespace {

BlockId tid(idx i, idx j) { return {BlockTag::T, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)}; }
BlockId uid(idx i, idx j) { return {BlockTag::U, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)}; }
BlockId vid(idx i, idx j) { return {BlockTag::V, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)}; }
BlockId gid(idx j) { return {BlockTag::G, static_cast<std::int32_t>(j), 0}; }
BlockId yid(idx l) { return {BlockTag::Y, static_cast<std::int32_t>(l), 0}; }
BlockId zid(idx l) { return {BlockTag::Z, static_cast<std::int32_t>(l), 0}; }
BlockId hid(idx l1, idx l2) { return {BlockTag::H, static_cast<std::int32_t>(l1), static_cast<std::int32_t>(l2)}; }
BlockId sid(idx step, idx l) { return {BlockTag::S, static_cast<std::int32_t>(step), static_cast<std::int32_t>(l)}; }
BlockId xid(idx step, idx j) { return {BlockTag::X, static_cast<std::int32_t>(step), static_cast<std::int32_t>(j)}; }
BlockId eid(idx step) { return {BlockTag::E, static_cast<std::int32_t>(step), 0}; }
BlockId did(idx step) { return {BlockTag::D, static_cast<std::int32_t>(step), 0}; }
BlockId pid(idx step) { return {BlockTag::P, static_cast<std::int32_t>(step), 0}; }
BlockId qid(idx step) { return {BlockTag::Q, static_cast<std::int32_t>(step), 0}; }
BlockId ptid(idx step) { return {BlockTag::Pt, static_cast<std::int32_t>(step), 0}; }

class Emitter {
public:
    Emitter(idx bm, idx bn, const UTVConfig& cfg) : bm_(bm), bn_(bn), cfg_(cfg) {}

    std::vector<Task> run() {
        for (idx i = 0;; ++i) {
            const idx mi = bm_ - i, ni = bn_ - i;
            if (mi <= 0 || ni <= 0) break;
            if (ni == 1) {
                final_column(i, mi);
                break;
            }
            full_step(i, mi, ni);
        }
        return std::move(ts_);
    }

private:
    void emit(TaskKind k, std::vector<BlockId> in, std::vector<BlockId> inout, idx step) {
        ts_.push_back(Task{k, std::move(in), std::move(inout), step});
    }

    // Sketch Y = (T22' T22)^q T22' G over the trailing mi x ni grid of blocks,
    // then its updating QR.  The right transform is applied to every block row
    // of T (the strip above a step sees the same column mixing) and, when
    // requested, to V.
    void right_transform(idx i, idx mi, idx ni) {
        for (idx j = 0; j < mi; ++j)
            emit(TaskKind::Generate_normal_random, {}, {gid(j)}, i);
        for (idx j = 0; j < mi; ++j)
            for (idx l = 0; l < ni; ++l)
                emit(j == 0 ? TaskKind::Gemm_tn_oz : TaskKind::Gemm_tn_oo,
                     {tid(i + j, i + l), gid(j)}, {yid(l)}, i);

        if (cfg_.q > 0) {
            // Gram blocks H(l1,l2) = sum_j T(j,l1)' T(j,l2); H is symmetric, so
            // H(l2,l1)' read through the transposed gemm realizes H(l1,l2) and
            // each power round is Y <- H Y in the closed kind set.
            for (idx l1 = 0; l1 < ni; ++l1)
                for (idx l2 = 0; l2 < ni; ++l2)
                    for (idx j = 0; j < mi; ++j)
                        emit(j == 0 ? TaskKind::Gemm_tn_oz : TaskKind::Gemm_tn_oo,
                             {tid(i + j, i + l1), tid(i + j, i + l2)}, {hid(l1, l2)}, i);
            for (int round = 0; round < cfg_.q; ++round) {
                for (idx l1 = 0; l1 < ni; ++l1)
                    for (idx l2 = 0; l2 < ni; ++l2)
                        emit(l2 == 0 ? TaskKind::Gemm_tn_oz : TaskKind::Gemm_tn_oo,
                             {hid(l2, l1), yid(l2)}, {zid(l1)}, i);
                for (idx l = 0; l < ni; ++l)
                    emit(TaskKind::Copy, {zid(l)}, {yid(l)}, i);
            }
        }

        emit(TaskKind::Comp_dense_QR, {}, {yid(0), sid(i, 0)}, i);
        emit(TaskKind::Copy, {yid(0)}, {eid(i)}, i);
        if (cfg_.build_v)
            for (idx r = 0; r < bn_; ++r)
                emit(TaskKind::Apply_right_Q_of_dense_QR, {eid(i), sid(i, 0)}, {vid(r, i)}, i);
        for (idx l = 1; l < ni; ++l) {
            emit(TaskKind::Comp_td_QR, {}, {yid(0), yid(l), sid(i, l)}, i);
            if (cfg_.build_v)
                for (idx r = 0; r < bn_; ++r)
                    emit(TaskKind::Apply_right_Q_td_QR, {yid(l), sid(i, l)},
                         {vid(r, i), vid(r, i + l)}, i);
        }
        for (idx r = 0; r < bm_; ++r)
            emit(TaskKind::Apply_right_Q_of_dense_QR, {eid(i), sid(i, 0)}, {tid(r, i)}, i);
        for (idx l = 1; l < ni; ++l)
            for (idx r = 0; r < bm_; ++r)
                emit(TaskKind::Apply_right_Q_td_QR, {yid(l), sid(i, l)},
                     {tid(r, i), tid(r, i + l)}, i);
    }

    // Updating QR of the step's leading block column; left-applies Q' to the
    // trailing columns and right-applies Q to U.
    void left_transform(idx i, idx mi, idx ni) {
        emit(TaskKind::Comp_dense_QR, {}, {tid(i, i), xid(i, 0)}, i);
        emit(TaskKind::Copy, {tid(i, i)}, {did(i)}, i);
        if (cfg_.build_u)
            for (idx r = 0; r < bm_; ++r)
                emit(TaskKind::Apply_right_Q_of_dense_QR, {did(i), xid(i, 0)}, {uid(r, i)}, i);
        for (idx j = 1; j < mi; ++j) {
            emit(TaskKind::Comp_td_QR, {}, {tid(i, i), tid(i + j, i), xid(i, j)}, i);
            if (cfg_.build_u)
                for (idx r = 0; r < bm_; ++r)
                    emit(TaskKind::Apply_right_Q_td_QR, {tid(i + j, i), xid(i, j)},
                         {uid(r, i), uid(r, i + j)}, i);
        }
        for (idx l = 1; l < ni; ++l)
            emit(TaskKind::Apply_left_Qt_of_dense_QR, {did(i), xid(i, 0)}, {tid(i, i + l)}, i);
        for (idx j = 1; j < mi; ++j)
            for (idx l = 1; l < ni; ++l)
                emit(TaskKind::Apply_left_Qt_of_td_QR, {tid(i + j, i), xid(i, j)},
                     {tid(i, i + l), tid(i + j, i + l)}, i);
    }

    std::vector<BlockId> svd_operands(idx i) {
        std::vector<BlockId> ops{tid(i, i), pid(i), qid(i)};
        if (cfg_.build_u) ops.push_back(ptid(i));
        return ops;
    }

    void accumulate_svd(idx i) {
        for (idx r = 0; r < i; ++r)
            emit(TaskKind::Gemm_aabt, {qid(i)}, {tid(r, i)}, i);
        if (cfg_.build_u)
            for (idx r = 0; r < bm_; ++r)
                emit(TaskKind::Gemm_aabt, {ptid(i)}, {uid(r, i)}, i);
        if (cfg_.build_v)
            for (idx r = 0; r < bn_; ++r)
                emit(TaskKind::Gemm_aabt, {qid(i)}, {vid(r, i)}, i);
    }

    void full_step(idx i, idx mi, idx ni) {
        right_transform(i, mi, ni);
        left_transform(i, mi, ni);
        emit(TaskKind::Keep_upper_triang, {}, {tid(i, i)}, i);
        for (idx j = 1; j < mi; ++j)
            emit(TaskKind::Set_to_zero, {}, {tid(i + j, i)}, i);
        emit(TaskKind::Svd_of_block, {}, svd_operands(i), i);
        for (idx l = 1; l < ni; ++l)
            emit(TaskKind::Gemm_abta, {pid(i)}, {tid(i, i + l)}, i);
        accumulate_svd(i);
    }

    // Last block column: updating QR collapses it to one triangular block
    // (nothing when the column is a single block), then one SVD finishes.
    void final_column(idx i, idx mi) {
        if (mi > 1) {
            emit(TaskKind::Comp_dense_QR, {}, {tid(i, i), xid(i, 0)}, i);
            emit(TaskKind::Copy, {tid(i, i)}, {did(i)}, i);
            if (cfg_.build_u)
                for (idx r = 0; r < bm_; ++r)
                    emit(TaskKind::Apply_right_Q_of_dense_QR, {did(i), xid(i, 0)}, {uid(r, i)}, i);
            for (idx j = 1; j < mi; ++j) {
                emit(TaskKind::Comp_td_QR, {}, {tid(i, i), tid(i + j, i), xid(i, j)}, i);
                if (cfg_.build_u)
                    for (idx r = 0; r < bm_; ++r)
                        emit(TaskKind::Apply_right_Q_td_QR, {tid(i + j, i), xid(i, j)},
                             {uid(r, i), uid(r, i + j)}, i);
            }
            emit(TaskKind::Keep_upper_triang, {}, {tid(i, i)}, i);
            for (idx j = 1; j < mi; ++j)
                emit(TaskKind::Set_to_zero, {}, {tid(i + j, i)}, i);
        }
        emit(TaskKind::Svd_of_block, {}, svd_operands(i), i);
        accumulate_svd(i);
    }

    idx bm_, bn_;
    UTVConfig cfg_;
    std::vector<Task> ts_;
};

void check_ab_config(idx m, idx n, const UTVConfig& cfg) {
    if (cfg.b < 1) throw ConfigError("block size must be >= 1, got " + std::to_string(cfg.b));
    if (cfg.q < 0)
        throw ConfigError("power iteration count must be >= 0, got " + std::to_string(cfg.q));
    if (m % cfg.b != 0 || n % cfg.b != 0)
        throw ConfigError("block size " + std::to_string(cfg.b) + " must divide both dimensions, got " +
                          std::to_string(m) + "x" + std::to_string(n));
}

}  // namespace

std::vector<Task> analyze(idx m, idx n, const UTVConfig& cfg) {
    check_ab_config(m, n, cfg);
    return Emitter(m / cfg.b, n / cfg.b, cfg).run();
}

std::vector<Task> analyze(ConstMatrixView a, const UTVConfig& cfg) {
    return analyze(a.rows, a.cols, cfg);
}

AbStorage::AbStorage(ConstMatrixView a, const UTVConfig& cfg, const std::vector<Task>& tasks)
    : b(cfg.b), seed(cfg.seed) {
    t = to_matrix(a);
    if (cfg.build_u) u = Matrix::identity(a.rows, a.rows);
    if (cfg.build_v) v = Matrix::identity(a.cols, a.cols);
    g = Matrix(a.rows, b);
    y = Matrix(a.cols, b);

    bool need_z = false, need_gram = false;
    for (const Task& task : tasks) {
        auto scan = [&](const BlockId& id) {
            switch (id.tag) {
                case BlockTag::Z: need_z = true; break;
                case BlockTag::H: need_gram = true; break;
                case BlockTag::S:
                case BlockTag::X:
                case BlockTag::E:
                case BlockTag::D:
                case BlockTag::P:
                case BlockTag::Q:
                case BlockTag::Pt:
                    scratch.try_emplace(id, b, b);
                    break;
                default: break;
            }
        };
        for (const BlockId& id : task.in) scan(id);
        for (const BlockId& id : task.inout) scan(id);
    }
    if (need_z) z = Matrix(a.cols, b);
    if (need_gram) gram = Matrix(a.cols, a.cols);
}

MatrixView AbStorage::resolve(const BlockId& id) {
    const idx ia = id.a, ib = id.b;
    switch (id.tag) {
        case BlockTag::T: return t.view(ia * b, ib * b, b, b);
        case BlockTag::U: return u.view(ia * b, ib * b, b, b);
        case BlockTag::V: return v.view(ia * b, ib * b, b, b);
        case BlockTag::G: return g.view(ia * b, 0, b, b);
        case BlockTag::Y: return y.view(ia * b, 0, b, b);
        case BlockTag::Z: return z.view(ia * b, 0, b, b);
        case BlockTag::H: return gram.view(ia * b, ib * b, b, b);
        default: break;
    }
    auto it = scratch.find(id);
    if (it == scratch.end()) throw IndexError("unknown scratch block " + id.str());
    return it->second.view();
}

void execute_task(AbStorage& st, const Task& task) {
    const idx b = st.b;
    switch (task.kind) {
        case TaskKind::Generate_normal_random: {
            MatrixView gb = st.resolve(task.inout[0]);
            RngState rng = RngState(st.seed).substream(static_cast<std::uint64_t>(task.step),
                                                       static_cast<std::uint64_t>(task.inout[0].a));
            generate_normal_random(rng, gb);
            return;
        }
        case TaskKind::Gemm_tn_oz:
        case TaskKind::Gemm_tn_oo: {
            ConstMatrixView a = st.resolve(task.in[0]);
            ConstMatrixView bb = st.resolve(task.in[1]);
            MatrixView c = st.resolve(task.inout[0]);
            gemm(1.0, Trans::T, a, Trans::N, bb,
                 task.kind == TaskKind::Gemm_tn_oz ? 0.0 : 1.0, c);
            return;
        }
        case TaskKind::Comp_dense_QR: {
            MatrixView blk = st.resolve(task.inout[0]);
            MatrixView s = st.resolve(task.inout[1]);
            std::vector<double> tau = hqr_inplace(blk);
            copy_into(s, form_wy_t(blk, tau).view());
            return;
        }
        case TaskKind::Comp_td_QR: {
            MatrixView r = st.resolve(task.inout[0]);
            MatrixView d = st.resolve(task.inout[1]);
            MatrixView s = st.resolve(task.inout[2]);
            std::vector<double> tau = comp_td_qr_inplace(r, d);
            copy_into(s, form_td_wy_t(d, tau).view());
            return;
        }
        case TaskKind::Copy:
            copy_into(st.resolve(task.inout[0]), st.resolve(task.in[0]));
            return;
        case TaskKind::Apply_right_Q_of_dense_QR:
            apply_q_right(st.resolve(task.in[0]), st.resolve(task.in[1]),
                          st.resolve(task.inout[0]));
            return;
        case TaskKind::Apply_right_Q_td_QR:
            apply_q_right_td(st.resolve(task.in[0]), st.resolve(task.in[1]),
                             st.resolve(task.inout[0]), st.resolve(task.inout[1]));
            return;
        case TaskKind::Apply_left_Qt_of_dense_QR:
            apply_qt_left(st.resolve(task.in[0]), st.resolve(task.in[1]),
                          st.resolve(task.inout[0]));
            return;
        case TaskKind::Apply_left_Qt_of_td_QR:
            apply_qt_left_td(st.resolve(task.in[0]), st.resolve(task.in[1]),
                             st.resolve(task.inout[0]), st.resolve(task.inout[1]));
            return;
        case TaskKind::Keep_upper_triang: {
            MatrixView blk = st.resolve(task.inout[0]);
            for (idx j = 0; j < b; ++j)
                for (idx i = j + 1; i < b; ++i) blk(i, j) = 0.0;
            return;
        }
        case TaskKind::Set_to_zero:
            fill(st.resolve(task.inout[0]), 0.0);
            return;
        case TaskKind::Svd_of_block: {
            MatrixView blk = st.resolve(task.inout[0]);
            MatrixView p = st.resolve(task.inout[1]);
            MatrixView q = st.resolve(task.inout[2]);
            SvdTriple s = svd_block(ConstMatrixView(blk));
            for (idx j = 0; j < b; ++j)
                for (idx i = 0; i < b; ++i)
                    blk(i, j) = i == j ? s.sigma[static_cast<std::size_t>(i)] : 0.0;
            copy_into(p, s.u.view());
            for (idx j = 0; j < b; ++j)
                for (idx i = 0; i < b; ++i) q(i, j) = s.v(j, i);  // V', ready for A B' products
            if (task.inout.size() > 3) {
                MatrixView pt = st.resolve(task.inout[3]);
                for (idx j = 0; j < b; ++j)
                    for (idx i = 0; i < b; ++i) pt(i, j) = s.u(j, i);
            }
            return;
        }
        case TaskKind::Gemm_abta: {
            ConstMatrixView bb = st.resolve(task.in[0]);
            MatrixView a = st.resolve(task.inout[0]);
            Matrix tmp(a.rows, a.cols);
            gemm(1.0, Trans::T, bb, Trans::N, a, 0.0, tmp.view());
            copy_into(a, tmp.view());
            return;
        }
        case TaskKind::Gemm_aabt: {
            ConstMatrixView bb = st.resolve(task.in[0]);
            MatrixView a = st.resolve(task.inout[0]);
            Matrix tmp(a.rows, a.cols);
            gemm(1.0, Trans::N, a, Trans::T, bb, 0.0, tmp.view());
            copy_into(a, tmp.view());
            return;
        }
    }
    throw TaskError("unhandled task kind", -1);
}

UTVResult randutv_ab_traced(ConstMatrixView a, const UTVConfig& cfg, int workers,
                            std::vector<TraceEvent>& trace_out) {
    std::vector<Task> tasks = analyze(a.rows, a.cols, cfg);
    AbStorage st(a, cfg, tasks);
    TaskGraph graph = build_dag(std::move(tasks));
    trace_out = execute(graph, workers, [&st](const Task& t) { execute_task(st, t); });

    UTVResult out;
    out.config = cfg;
    out.t = std::move(st.t);
    out.u = std::move(st.u);
    out.v = std::move(st.v);
    return out;
}

UTVResult randutv_ab(ConstMatrixView a, const UTVConfig& cfg, int workers) {
    std::vector<TraceEvent> trace;
    return randutv_ab_traced(a, cfg, workers, trace);
}

}  // namespace randutv
