use fractrans::fracops::{build_weights, caputo_l1_at};
use fractrans::mlf::{ml_time_solution, mittag_leffler};
use fractrans::problem::FractionalOrder;

// L1 solve of D^alpha u = -u, u(0)=1 on [0,1]; error at t=1 vs E_alpha(-1).
fn relax_error(alpha: f64, nt: usize) -> f64 {
    let tau = 1.0 / nt as f64;
    let order = FractionalOrder::new(alpha).unwrap();
    let w = build_weights(order, tau, nt);
    let scale = w.scale();
    let b = w.weights();
    let mut u = vec![1.0f64; nt + 1];
    for n in 1..=nt {
        // scale*(b0*(u_n - u_{n-1}) + hist) = -u_n
        let mut hist = 0.0;
        for k in 1..n {
            hist += b[k] * (u[n - k] - u[n - k - 1]);
        }
        u[n] = (scale * (b[0] * u[n - 1] - hist)) / (scale * b[0] + 1.0);
    }
    (u[nt] - ml_time_solution(alpha, -1.0, 1.0, 1.0).unwrap()).abs()
}

// L1 solve of D^alpha u = 1, u(0)=0; error at t=1 vs t^alpha/Gamma(1+alpha).
fn fode_error(alpha: f64, nt: usize) -> f64 {
    let tau = 1.0 / nt as f64;
    let order = FractionalOrder::new(alpha).unwrap();
    let w = build_weights(order, tau, nt);
    let scale = w.scale();
    let b = w.weights();
    let mut u = vec![0.0f64; nt + 1];
    for n in 1..=nt {
        let mut hist = 0.0;
        for k in 1..n {
            hist += b[k] * (u[n - k] - u[n - k - 1]);
        }
        u[n] = (1.0 + scale * (b[0] * u[n - 1] - hist)) / (scale * b[0]);
    }
    let exact = 1.0 / (statrs::function::gamma::gamma(1.5));
    (u[nt] - exact).abs()
}

fn main() {
    for nt in [64, 128, 256, 512, 1024] {
        println!("relax alpha=0.5 nt={nt}: err at t=1 = {:.3e}", relax_error(0.5, nt));
    }
    println!("fode alpha=0.5 nt=2048: err = {:.3e}", fode_error(0.5, 2048));
    // sanity: E values used
    println!("E05(-1) = {:.12}", mittag_leffler(0.5,1.0,-1.0).unwrap());
}
