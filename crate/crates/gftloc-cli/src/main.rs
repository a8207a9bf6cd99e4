fn main() {
    println!("gftloc");
}
