// Links the installed package and verifies-then-checks one query.
#include "nnproof/checker.hpp"
#include "nnproof/search.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    if (argc != 3)
        return 2;
    auto verdict = nnproof::verify(nnproof::load_network(argv[1]), nnproof::load_property(argv[2]), {});
    const bool ok = verdict.is_unsat() &&
                    nnproof::checker::check_proof(std::get<nnproof::Unsat>(verdict.outcome).proof).accepted();
    std::cout << (ok ? "accept" : "reject") << "\n";
    return ok ? 0 : 1;
}
