use coarse_scope::presentation::FibredPresentation;
use coarse_scope::snapshot::VertexKey;

fn main() {
    for preset in ["bs(1,3)", "f2xZ"] {
        let pres = FibredPresentation::preset(preset).unwrap();
        let ball = pres.ball(7, 5_000_000).unwrap();
        println!("== {preset}: ball size {}", ball.len());
        let n = ball.len();
        let mut fd = vec![u32::MAX; n];
        let mut q = std::collections::VecDeque::new();
        for v in 0..n as u32 {
            let VertexKey::Element(e) = &ball.keys()[v as usize] else { unreachable!() };
            if e.in_fibre() { fd[v as usize] = 0; q.push_back(v); }
        }
        while let Some(v) = q.pop_front() {
            for &w in ball.neighbors(v) {
                if fd[w as usize] == u32::MAX { fd[w as usize] = fd[v as usize] + 1; q.push_back(w); }
            }
        }
        let keep: Vec<bool> = fd.iter().map(|&d| d >= 1).collect();
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<(usize, u32, u32, u32)> = Vec::new(); // size, max_fibre_dist, max_base_dist, rep
        for s in 0..n {
            if !keep[s] || comp[s] != usize::MAX { continue; }
            let id = comps.len();
            let (mut size, mut mfd, mut mbd) = (0usize, 0u32, 0u32);
            let mut q = std::collections::VecDeque::from([s]);
            comp[s] = id;
            while let Some(v) = q.pop_front() {
                size += 1;
                mfd = mfd.max(fd[v]);
                mbd = mbd.max(ball.dist(v as u32));
                for &w in ball.neighbors(v as u32) {
                    if keep[w as usize] && comp[w as usize] == usize::MAX { comp[w as usize] = id; q.push_back(w as usize); }
                }
            }
            comps.push((size, mfd, mbd, s as u32));
        }
        for (size, mfd, mbd, rep) in &comps {
            println!("  size {size:6} max_fibre_dist {mfd} max_base_dist {mbd} rep {}", ball.label(*rep));
        }
    }
}
