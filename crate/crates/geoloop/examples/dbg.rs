use geoloop::develop::*;
use geoloop::kernel::*;
use geoloop::sph_loops::*;
use geoloop::tetra::*;
use geoloop::tol::Tolerances;

fn main() {
    let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.75 * std::f64::consts::PI).unwrap();
    let cands = enumerate_candidates(&t, VertexId::A4).unwrap();
    let c = &cands[0];
    let (img1, img2) = c.apex_images;
    let d12 = dist(&img1, &img2).unwrap();
    println!("middle {} d12 = {d12}", c.middle);
    let hub = c.development.faces()[0].corner(c.middle);
    println!("schedule: {:?}", c.development.interior_edge_schedule());
    let u = direction_to(&img1, &img2).unwrap();
    for (name, dir, len) in [("minor", u, d12), ("major", -u, 2.0*std::f64::consts::PI - d12)] {
        // wedge margin
        let first = &c.development.faces()[0];
        let mut margin = f64::INFINITY;
        for (k, e) in first.face.edges().iter().enumerate() {
            if !e.contains(c.apex) { continue; }
            margin = margin.min(dir.dot(&first.inward_poles[k]));
        }
        println!("{name}: margin {margin:.6} len {len:.4}");
        match walk_ray(&c.development, &img1, &dir, len, Some(&img2), &Tolerances::default()).unwrap() {
            Ok(w) => println!("  WALK OK crossings {:?}", w.crossings.iter().map(|x| (x.edge, x.ray_param)).collect::<Vec<_>>()),
            Err(f) => println!("  fail {f:?}"),
        }
    }
    // Where is O relative to hub?
    let pole = geodesic_pole(&img1, &img2).unwrap();
    let mut o = ModelPoint::renormalized(pole, Curvature::Spherical);
    if o.coords().dot(&hub.coords()) < 0.0 { o = ModelPoint::renormalized(-pole, Curvature::Spherical); }
    println!("dist(O, hub) = {} (pi/2 = {})", dist(&o, &hub).unwrap(), std::f64::consts::FRAC_PI_2);
    for im in c.development.vertex_images() {
        println!("dist(O, {} img) = {:.6}", im.vertex, dist(&o, &im.point).unwrap());
    }
}
