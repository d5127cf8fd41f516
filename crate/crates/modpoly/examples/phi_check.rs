use modpoly::classical::classical_phi;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let phi3 = classical_phi(3).unwrap();
    println!("phi3 in {:?}", t0.elapsed());
    // textbook phi_3 coefficients
    assert_eq!(phi3.get(3, 3).to_string(), "-1");
    assert_eq!(phi3.get(3, 2).to_string(), "2232");
    assert_eq!(phi3.get(3, 1).to_string(), "-1069956");
    assert_eq!(phi3.get(3, 0).to_string(), "36864000");
    assert_eq!(phi3.get(2, 2).to_string(), "2587918086");
    assert_eq!(phi3.get(2, 1).to_string(), "8900222976000");
    assert_eq!(phi3.get(2, 0).to_string(), "452984832000000");
    assert_eq!(phi3.get(1, 1).to_string(), "-770845966336000000");
    assert_eq!(phi3.get(1, 0).to_string(), "1855425871872000000000");
    assert_eq!(phi3.get(0, 0).to_string(), "0");
    println!("phi3 matches textbook values");
    let t1 = Instant::now();
    let phi5 = classical_phi(5).unwrap();
    println!("phi5 in {:?}; c[0][0] = {}", t1.elapsed(), phi5.get(0, 0));
    let t2 = Instant::now();
    let phi7 = classical_phi(7).unwrap();
    println!("phi7 in {:?}; c[6][6] = {}", t2.elapsed(), phi7.get(6, 6));
    assert!(phi5.is_symmetric() && phi5.shape_ok());
    assert!(phi7.is_symmetric() && phi7.shape_ok());
}
