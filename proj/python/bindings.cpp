#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "anchoralign/anchoring.hpp"
#include "anchoralign/bead_io.hpp"
#include "anchoralign/config.hpp"
#include "anchoralign/cost_model.hpp"
#include "anchoralign/embedding_store.hpp"
#include "anchoralign/error.hpp"
#include "anchoralign/pipeline.hpp"
#include "anchoralign/scoring.hpp"

namespace py = pybind11;
using namespace anchoralign;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

EmbeddingMatrix to_matrix(const FloatArray& a) {
    if (a.ndim() != 2) {
        throw py::value_error("embeddings must be a 2-D array");
    }
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto dim = static_cast<std::size_t>(a.shape(1));
    std::vector<float> data(a.data(), a.data() + rows * dim);
    return EmbeddingMatrix(rows, dim, std::move(data));
}

py::array_t<float> to_array(const EmbeddingMatrix& m) {
    py::array_t<float> out({m.rows(), m.dim()});
    if (!m.data().empty()) {
        std::memcpy(out.mutable_data(), m.data().data(), m.data().size() * sizeof(float));
    }
    return out;
}

// Options use the same names as the command line and config files.
AlignConfig make_config(const py::dict& options) {
    AlignConfig config;
    for (const auto& [key, value] : options) {
        std::string text;
        if (py::isinstance<py::bool_>(value)) {
            text = value.cast<bool>() ? "true" : "false";
        } else if (value.is_none()) {
            text = "auto";
        } else {
            text = py::str(value).cast<std::string>();
        }
        set_config_value(config, key.cast<std::string>(), text);
    }
    config.validate();
    return config;
}

BeadKey to_key(const py::handle& bead) {
    const auto pair = bead.cast<py::sequence>();
    if (pair.size() < 2) {
        throw py::value_error("a bead is a (source indices, target indices) pair");
    }
    BeadKey key{pair[0].cast<std::vector<std::size_t>>(), pair[1].cast<std::vector<std::size_t>>()};
    std::sort(key.src.begin(), key.src.end());
    std::sort(key.tgt.begin(), key.tgt.end());
    return key;
}

std::vector<BeadKey> to_keys(const py::iterable& beads) {
    std::vector<BeadKey> out;
    for (const auto& b : beads) {
        out.push_back(to_key(b));
    }
    return out;
}

py::list range_list(IndexRange r) {
    py::list out;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        out.append(i);
    }
    return out;
}

py::tuple anchor_tuple(const AnchorPoint& a) {
    return py::make_tuple(a.x, a.y, a.sim, a.density_ratio);
}

py::dict prf_dict(const PRF& prf) {
    py::dict d;
    d["precision"] = prf.precision;
    d["recall"] = prf.recall;
    d["f1"] = prf.f1;
    d["n_pred"] = prf.n_pred;
    d["n_gold"] = prf.n_gold;
    d["n_correct"] = prf.n_correct;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Anchor-guided bitext sentence alignment";

    static py::exception<Error> error_type(m, "AlignError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = error_code_name(e.code());
            exc.attr("index") = e.index() ? py::cast(*e.index()) : py::none();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("load_matrix", [](const std::string& path, const std::string& format) {
        return to_array(load_matrix(path, parse_matrix_format(format)));
    }, py::arg("path"), py::arg("format") = "binary");

    m.def("write_matrix", [](const std::string& path, const FloatArray& a, const std::string& format) {
        write_matrix(path, to_matrix(a), parse_matrix_format(format));
    }, py::arg("path"), py::arg("matrix"), py::arg("format") = "binary");

    m.def("encode_matrix", [](const FloatArray& a) {
        const auto bytes = encode_binary_matrix(to_matrix(a));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }, py::arg("matrix"), "Serialize to the binary .aemb layout.");

    m.def("decode_matrix", [](const py::bytes& data) {
        const std::string s = data;
        const auto* p = reinterpret_cast<const unsigned char*>(s.data());
        return to_array(decode_binary_matrix({p, s.size()}));
    }, py::arg("data"));

    m.def("l2_normalize", [](const FloatArray& a) { return to_array(l2_normalize(to_matrix(a))); },
          py::arg("matrix"));

    m.def("similarity", [](const FloatArray& src, const FloatArray& tgt, unsigned threads) {
        const auto sim = similarity_matrix(l2_normalize(to_matrix(src)), l2_normalize(to_matrix(tgt)), threads);
        py::array_t<double> out({sim.n_src, sim.n_tgt});
        if (!sim.values.empty()) {
            std::memcpy(out.mutable_data(), sim.values.data(), sim.values.size() * sizeof(double));
        }
        return out;
    }, py::arg("src"), py::arg("tgt"), py::arg("threads") = 1,
       "Cosine similarity of every source row against every target row.");

    m.def("extract_anchors", [](const FloatArray& src, const FloatArray& tgt, const py::dict& options) {
        AlignConfig config = make_config(options);
        const auto a = to_matrix(src);
        const auto b = to_matrix(tgt);
        if (a.dim() != b.dim()) {
            throw Error(ErrorCode::DimMismatch, "source and target embeddings differ in dimension");
        }
        config.anchor.sent_ratio = config.sent_ratio.value_or(
            a.rows() > 0 ? static_cast<double>(b.rows()) / static_cast<double>(a.rows()) : 1.0);
        const auto sim = similarity_matrix(l2_normalize(a), l2_normalize(b), config.threads);
        py::list out;
        for (const auto& p : extract_anchors(sim, config.anchor)) {
            out.append(anchor_tuple(p));
        }
        return out;
    }, py::arg("src"), py::arg("tgt"), py::arg("options") = py::dict(),
       "Anchor points as (x, y, sim, density_ratio) tuples.");

    m.def("align", [](const std::vector<std::string>& src_sents, const std::vector<std::string>& tgt_sents,
                      const FloatArray& src_emb, const FloatArray& tgt_emb, const py::dict& options) {
        const AlignConfig config = make_config(options);
        const SentenceDoc src_doc(src_sents);
        const SentenceDoc tgt_doc(tgt_sents);
        const auto a = to_matrix(src_emb);
        const auto b = to_matrix(tgt_emb);
        DocumentAlignment res;
        {
            py::gil_scoped_release release;
            res = align_documents(src_doc, tgt_doc, a, b, config);
        }
        py::list beads;
        for (const auto& bead : res.beads()) {
            beads.append(py::make_tuple(range_list(bead.src), range_list(bead.tgt), bead.cost));
        }
        py::list anchors;
        for (const auto& p : res.anchors) {
            anchors.append(anchor_tuple(p));
        }
        py::list intervals;
        for (const auto& ai : res.intervals) {
            const auto& iv = ai.interval;
            intervals.append(py::make_tuple(py::make_tuple(iv.src.begin, iv.src.end),
                                            py::make_tuple(iv.tgt.begin, iv.tgt.end), iv.anchors.size()));
        }
        py::dict out;
        out["beads"] = beads;
        out["avg_score"] = res.avg_score;
        out["anchors"] = anchors;
        out["intervals"] = intervals;
        out["sent_ratio"] = res.ratios.sent_ratio;
        out["char_ratio"] = res.ratios.char_ratio;
        out["fell_back"] = res.fell_back;
        return out;
    }, py::arg("src_sentences"), py::arg("tgt_sentences"), py::arg("src_emb"), py::arg("tgt_emb"),
       py::arg("options") = py::dict(),
       "Align two documents. Beads are (source indices, target indices, cost).");

    m.def("bead_cost", [](const std::vector<std::string>& src_sents, const std::vector<std::string>& tgt_sents,
                          const FloatArray& src_emb, const FloatArray& tgt_emb, std::pair<std::size_t, std::size_t> src,
                          std::pair<std::size_t, std::size_t> tgt, const py::dict& options) {
        const AlignConfig config = make_config(options);
        CostParams cost = config.cost;
        cost.char_ratio = config.char_ratio.value_or(1.0);
        const SentenceDoc src_doc(src_sents);
        const SentenceDoc tgt_doc(tgt_sents);
        const BeadScorer scorer(src_doc, tgt_doc, to_matrix(src_emb), to_matrix(tgt_emb), cost);
        return scorer.bead_cost({src.first, src.second}, {tgt.first, tgt.second});
    }, py::arg("src_sentences"), py::arg("tgt_sentences"), py::arg("src_emb"), py::arg("tgt_emb"),
       py::arg("src_range"), py::arg("tgt_range"), py::arg("options") = py::dict(),
       "Cost of one bead over half-open sentence ranges.");

    m.def("d_length", &d_length, py::arg("src_chars"), py::arg("tgt_chars"), py::arg("char_ratio") = 1.0,
          py::arg("length_slope") = 1.0);

    m.def("strict_prf", [](const py::iterable& pred, const py::iterable& gold, bool include_null) {
        return prf_dict(strict_prf(to_keys(pred), make_gold(to_keys(gold)), include_null));
    }, py::arg("pred"), py::arg("gold"), py::arg("include_null") = true,
       "Exact-match precision, recall and F1 over (source, target) index-set beads.");

    m.def("parse_beads", [](const std::string& text, const std::string& format) {
        py::list out;
        for (const auto& key : parse_beads(text, parse_bead_format(format))) {
            out.append(py::make_tuple(key.src, key.tgt));
        }
        return out;
    }, py::arg("text"), py::arg("format") = "tsv");

    m.def("print_config", [](const py::dict& options) { return print_config(make_config(options)); },
          py::arg("options") = py::dict());
}
