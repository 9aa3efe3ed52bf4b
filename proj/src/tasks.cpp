#include "randutv/tasks.hpp"

namespace randutv {

const char* task_kind_name(TaskKind k) {
    switch (k) {
        case TaskKind::Generate_normal_random: return "Generate_normal_random";
        case TaskKind::Gemm_tn_oz: return "Gemm_tn_oz";
        case TaskKind::Gemm_tn_oo: return "Gemm_tn_oo";
        case TaskKind::Comp_dense_QR: return "Comp_dense_QR";
        case TaskKind::Comp_td_QR: return "Comp_td_QR";
        case TaskKind::Copy: return "Copy";
        case TaskKind::Apply_right_Q_of_dense_QR: return "Apply_right_Q_of_dense_QR";
        case TaskKind::Apply_right_Q_td_QR: return "Apply_right_Q_td_QR";
        case TaskKind::Apply_left_Qt_of_dense_QR: return "Apply_left_Qt_of_dense_QR";
        case TaskKind::Apply_left_Qt_of_td_QR: return "Apply_left_Qt_of_td_QR";
        case TaskKind::Keep_upper_triang: return "Keep_upper_triang";
        case TaskKind::Set_to_zero: return "Set_to_zero";
        case TaskKind::Svd_of_block: return "Svd_of_block";
        case TaskKind::Gemm_abta: return "Gemm_abta";
        case TaskKind::Gemm_aabt: return "Gemm_aabt";
    }
    return "?";
}

std::string BlockId::str() const {
    switch (tag) {
        case BlockTag::T: return "T" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::U: return "U" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::V: return "V" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::G: return "G" + std::to_string(a);
        case BlockTag::Y: return "Y" + std::to_string(a);
        case BlockTag::Z: return "Z" + std::to_string(a);
        case BlockTag::H: return "H" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::S: return "S" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::X: return "X" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::E: return "E" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::D: return "D" + std::to_string(a) + "." + std::to_string(b);
        case BlockTag::P: return "P" + std::to_string(a);
        case BlockTag::Q: return "Q" + std::to_string(a);
        case BlockTag::Pt: return "Pt" + std::to_string(a);
    }
    return "?";
}

std::string transcript_line(const Task& t) {
    std::string s = task_kind_name(t.kind);
    s += " in=[";
    for (std::size_t i = 0; i < t.in.size(); ++i) {
        if (i) s += ",";
        s += t.in[i].str();
    }
    s += "] inout=[";
    for (std::size_t i = 0; i < t.inout.size(); ++i) {
        if (i) s += ",";
        s += t.inout[i].str();
    }
    s += "] step=" + std::to_string(t.step);
    return s;
}

std::string transcript(const std::vector<Task>& tasks) {
    std::string s;
    for (const Task& t : tasks) {
        s += transcript_line(t);
        s += "\n";
    }
    return s;
}

}  // namespace randutv
