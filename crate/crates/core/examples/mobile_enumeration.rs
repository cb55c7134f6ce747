//! Counts mobiles of several families and prints one in dot format.

use girthmaps::mobile::{enumerate_mobiles, MobileSpec};

fn main() {
    for spec in [
        MobileSpec::DBranching(1),
        MobileSpec::DBranching(3),
        MobileSpec::BDibranching(1),
        MobileSpec::Typed { d: 2, p: 2, q: 3 },
        MobileSpec::ZeroBranching,
    ] {
        let all = enumerate_mobiles(spec, 4, 2);
        let buds: usize = all.iter().map(|t| t.n_buds()).sum();
        println!("{spec:?}: {} mobiles with at most 2 black vertices of degree <= 4 ({buds} buds)", all.len());
    }
    let tri = enumerate_mobiles(MobileSpec::DBranching(3), 3, 1);
    println!("{}", tri[0].dot());
}
