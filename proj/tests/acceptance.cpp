#include <cstdlib>
#include <iostream>

#include "weilgap/acceptance.hpp"

int main(int argc, char** argv)
{
    using namespace weilgap;
    const bool with_experiment = argc > 1 && std::string(argv[1]) == "--experiment";
    bool all = true;
    for (int id = 1; id <= kCriteria; ++id) {
        const CriterionResult r = run_criterion(id);
        std::cout << criterion_line(r) << std::endl;
        if (!r.pass)
            std::cout << "  detail: " << r.detail.dump() << std::endl;
        all = all && r.pass;
    }
    if (with_experiment)
        std::cout << "experiment (not gating): " << infinite_order_experiment().dump() << std::endl;
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
