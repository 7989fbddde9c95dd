#include <linfty/multilinear.hpp>

#include <sstream>

namespace linfty {

template class MultiMapT<Rat>;
template class MultiMapT<double>;

std::string describe(const GradedMultilinearMap& m) {
    std::ostringstream os;
    os << "map(arity=" << m.arity() << ", degree=" << m.degree() << ")";
    for (auto& [key, row] : m.entries()) {
        os << "\n  (";
        for (std::size_t i = 0; i < key.size(); ++i)
            os << (i ? "," : "") << m.source()->at(key[i]).name;
        os << ") ->";
        for (auto& [out, c] : row) os << " " << rat_str(c) << "*" << m.target()->at(out).name;
    }
    return os.str();
}

}  // namespace linfty
