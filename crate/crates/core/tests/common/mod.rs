#![allow(dead_code)]

/// A formula in the text syntax with parameter values to evaluate it at.
pub struct Fixture {
    pub name: &'static str,
    pub src: &'static str,
    pub samples: &'static [&'static [i64]],
}

pub const MCNUGGETS: &str = "param t; free x y z; x >= 0 and y >= 0 and z >= 0 and 6*x + 9*y + 20*z = t";
pub const BURGER: &str =
    "param s t; free x y z; x >= 0 and y >= 0 and z >= 0 and 2*x + 2*y + 3*z = s and 2*x + y + 2*z = t";
pub const TRAPEZOID: &str = "param s t; free x y; y >= 0 and y <= s and y <= x and x + y <= t";
pub const CHROMATIC: &str = "param t; free xa xb xc;
    1 <= xa and xa <= t and 1 <= xb and xb <= t and 1 <= xc and xc <= t and xa != xb and xb != xc";
pub const TWIST: &str = "param t; free x y;
    -(t^2 - 2*t + 2) <= 2*x + (2*t - 2)*y and 2*x + (2*t - 2)*y <= t^2 - 2*t + 2 and
    -(t^2 - 2*t + 2) <= (2 - 2*t)*x + 2*y and (2 - 2*t)*x + 2*y <= t^2 - 2*t + 2";
pub const MAGIC: &str = "param t; free a b c d e f g h i;
    a >= 1 and b >= 1 and c >= 1 and d >= 1 and e >= 1 and f >= 1 and g >= 1 and h >= 1 and i >= 1
    and a + b + c = t and d + e + f = t and g + h + i = t
    and a + d + g = t and b + e + h = t and c + f + i = t
    and a + e + i = t and c + e + g = t
    and a != b and a != c and a != d and a != e and a != f and a != g and a != h and a != i
    and b != c and b != d and b != e and b != f and b != g and b != h and b != i
    and c != d and c != e and c != f and c != g and c != h and c != i
    and d != e and d != f and d != g and d != h and d != i
    and e != f and e != g and e != h and e != i
    and f != g and f != h and f != i
    and g != h and g != i
    and h != i";
pub const QUEENS: &str = "param t; free x1 y1 x2 y2 x3 y3;
    1 <= x1 and x1 <= t and 1 <= y1 and y1 <= t
    and 1 <= x2 and x2 <= t and 1 <= y2 and y2 <= t
    and 1 <= x3 and x3 <= t and 1 <= y3 and y3 <= t
    and x1 != x2 and y1 != y2 and x1 - y1 != x2 - y2 and x1 + y1 != x2 + y2
    and x1 != x3 and y1 != y3 and x1 - y1 != x3 - y3 and x1 + y1 != x3 + y3
    and x2 != x3 and y2 != y3 and x2 - y2 != x3 - y3 and x2 + y2 != x3 + y3";
pub const ODD: &str = "param t; free x; exists y. x = 2*y + 1 and 1 <= x and x <= t";
pub const GAPS_35: &str = "free n; 1 <= n and n <= 15 and not exists x. exists y. x >= 0 and y >= 0 and 3*x + 5*y = n";

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "mcnuggets", src: MCNUGGETS, samples: &[&[18], &[43], &[44], &[75], &[0]] },
    Fixture { name: "burger", src: BURGER, samples: &[&[14, 9], &[6, 4], &[10, 8], &[12, 7], &[3, 3]] },
    Fixture { name: "trapezoid", src: TRAPEZOID, samples: &[&[1, 5], &[3, 4], &[2, 9], &[6, 6], &[0, 0]] },
    Fixture { name: "chromatic", src: CHROMATIC, samples: &[&[1], &[2], &[3], &[5], &[8]] },
    Fixture { name: "twist", src: TWIST, samples: &[&[1], &[2], &[4], &[5], &[7]] },
    Fixture { name: "magic", src: MAGIC, samples: &[&[15], &[16], &[18], &[24], &[27]] },
    Fixture { name: "queens", src: QUEENS, samples: &[&[1], &[2], &[3], &[4], &[5]] },
    Fixture { name: "odd", src: ODD, samples: &[&[0], &[1], &[10], &[11], &[25]] },
    Fixture { name: "gaps_3_5", src: GAPS_35, samples: &[&[]] },
    Fixture {
        name: "semigroup_3_5",
        src: "param t; free n; 0 <= n and n <= t and exists x. exists y. x >= 0 and y >= 0 and 3*x + 5*y = n",
        samples: &[&[0], &[7], &[20], &[60]],
    },
    Fixture { name: "triangle_t", src: "param t; free x y; 0 <= y and y <= x and x <= t", samples: &[&[0], &[1], &[4], &[9]] },
    Fixture {
        name: "triangle_q",
        src: "param t; free x y; x + y >= t and 2*x - y <= 2*t and 2*y - x <= 2*t",
        samples: &[&[0], &[1], &[2], &[5]],
    },
    Fixture {
        name: "tetrahedron",
        src: "param t; free x y z; x >= 0 and y >= 0 and z >= 0 and x + y + z <= t",
        samples: &[&[0], &[1], &[3], &[6]],
    },
    Fixture { name: "half_interval", src: "param t; free x; 0 <= 2*x and 2*x <= t", samples: &[&[0], &[1], &[2], &[7]] },
    Fixture {
        name: "period_three_triangle",
        src: "param t; free x y; 0 <= x and 3*x <= y and y <= t",
        samples: &[&[0], &[1], &[2], &[3], &[11]],
    },
    Fixture {
        name: "gcd_slice",
        src: "param t; free x y; x >= 0 and y >= 0 and 4*x + t*y = 4*t",
        samples: &[&[1], &[6], &[8], &[9]],
    },
    Fixture {
        name: "bounded_mcnugget_box",
        src: "param r s u; free n; exists a. exists b. exists c. 0 <= a and a <= r and 0 <= b and b <= s and 0 <= c and c <= u and n = 6*a + 9*b + 20*c",
        samples: &[&[1, 0, 0], &[2, 1, 1]],
    },
    Fixture { name: "strict_sugar", src: "param t; free x; 0 < x and x < t", samples: &[&[0], &[1], &[5]] },
    Fixture { name: "divisibility", src: "param t; free x; 0 <= x and x <= t and 3 | x - 1", samples: &[&[0], &[1], &[10], &[30]] },
    Fixture {
        name: "two_divisibilities",
        src: "param t; free x; 0 <= x and x <= t and (2 | x or 3 | x)",
        samples: &[&[0], &[6], &[17], &[36]],
    },
    Fixture { name: "negated_divisibility", src: "free x; 0 <= x and x <= 20 and not 4 | x + 2", samples: &[&[]] },
    Fixture {
        name: "disjoint_union",
        src: "param t; free x y; (0 <= x and x <= t and y = 0) or (0 <= y and y <= t and x = 0)",
        samples: &[&[0], &[1], &[6]],
    },
    Fixture {
        name: "negated_box",
        src: "param t; free x y; 0 <= x and x <= t and 0 <= y and y <= t and not (x <= 1 and y <= 1)",
        samples: &[&[0], &[1], &[2], &[5]],
    },
    Fixture {
        name: "forall_below",
        src: "param t; free x; 0 <= x and x <= t and forall y. (y < 0 or y >= x or 2 | y)",
        samples: &[&[0], &[1], &[5], &[12]],
    },
    Fixture {
        name: "exists_between",
        src: "param t; free x; 0 <= x and x <= t and exists y. 2*y <= x and x <= 2*y + 1 and 3 | y",
        samples: &[&[0], &[7], &[20]],
    },
    Fixture {
        name: "nested_exists",
        src: "param t; free x; 0 <= x and x <= t and exists y. exists z. y >= 0 and z >= 0 and x = 4*y + 7*z",
        samples: &[&[0], &[17], &[40]],
    },
    Fixture {
        name: "multiple_of_three_nonneg",
        src: "param t; free x; exists y. x = 3*y and 0 <= y and x <= t",
        samples: &[&[0], &[2], &[9], &[14]],
    },
    Fixture {
        name: "diagonal_band",
        src: "param t; free x y; 0 <= x and x <= t and 0 <= y and y <= t and -1 <= x - y and x - y <= 1",
        samples: &[&[0], &[1], &[5]],
    },
    Fixture {
        name: "lattice_line",
        src: "param t; free x y; 0 <= x and 0 <= y and 2*x + 3*y = t",
        samples: &[&[0], &[1], &[5], &[12], &[31]],
    },
    Fixture { name: "empty_by_parity", src: "param t; free x; 2*x = 2*t + 1", samples: &[&[0], &[3]] },
    Fixture { name: "unbounded_ray", src: "param t; free x; x >= t", samples: &[&[0], &[4]] },
    Fixture { name: "unbounded_line", src: "free x y; x = y + 1", samples: &[&[]] },
    Fixture { name: "true_literal", src: "free x; true and 0 <= x and x <= 3", samples: &[&[]] },
    Fixture { name: "false_literal", src: "free x; false or 0 <= x and x <= 3", samples: &[&[]] },
    Fixture {
        name: "comment_and_newlines",
        src: "param t   # the dilation\nfree x y\n0 <= x\nand x <= t   # width\nand 0 <= y and y <= 2",
        samples: &[&[0], &[3]],
    },
    Fixture {
        name: "polynomial_parameter",
        src: "param t; free x; 0 <= x and x <= t^2 - 3*t + 5",
        samples: &[&[0], &[1], &[4], &[10]],
    },
    Fixture {
        name: "parametric_coefficient",
        src: "param t; free x; 0 <= (t + 1)*x and (t + 1)*x <= t^2 + 10",
        samples: &[&[0], &[2], &[6]],
    },
    Fixture {
        name: "floor_quotient",
        src: "param t; free q; exists r. 0 <= r and r <= 2*t + 2 and q >= 0 and t^2 = (2*t + 3)*q + r",
        samples: &[&[1], &[3], &[4], &[9]],
    },
    Fixture {
        name: "mixed_quantifiers",
        src: "param t; free x; 0 <= x and x <= t and exists y. 0 <= y and y <= 3 and forall z. (z < 0 or z > y or not x = 4*z + 1)",
        samples: &[&[0], &[9], &[21]],
    },
    Fixture { name: "equality_chain", src: "param t; free x y z; x = y and y = z and 0 <= x and x <= t", samples: &[&[0], &[4]] },
    Fixture {
        name: "scaled_equality",
        src: "param t; free x y; 0 <= x and 0 <= y and 4*x + 6*y = 2*t",
        samples: &[&[0], &[1], &[7], &[12]],
    },
    Fixture {
        name: "cube_minus_diagonal",
        src: "param t; free x y z; 0 <= x and x <= t and 0 <= y and y <= t and 0 <= z and z <= t and not (x = y and y = z)",
        samples: &[&[0], &[1], &[3]],
    },
    Fixture {
        name: "gap_count_4_7",
        src: "free n; 1 <= n and n <= 40 and not exists x. exists y. x >= 0 and y >= 0 and 4*x + 7*y = n",
        samples: &[&[]],
    },
    Fixture {
        name: "apery_class",
        src: "param t; free n; 0 <= n and n <= t and exists k. n = 3*k + 2 and exists x. exists y. x >= 0 and y >= 0 and 3*x + 5*y = n",
        samples: &[&[4], &[30]],
    },
    Fixture {
        name: "negative_range",
        src: "param t; free x y; -t <= x and x <= t and -t <= y and y <= t and x + y >= 0",
        samples: &[&[0], &[2], &[5]],
    },
    Fixture {
        name: "or_of_divisibility_and_bound",
        src: "param t; free x; -t <= x and x <= t and (5 | x or x >= t - 2)",
        samples: &[&[0], &[3], &[12]],
    },
    Fixture {
        name: "not_exists_square_free",
        src: "param t; free x; 1 <= x and x <= t and not exists y. 4*y = x",
        samples: &[&[1], &[8], &[25]],
    },
    Fixture {
        name: "two_param_rectangle",
        src: "param s t; free x y; 0 <= x and x <= s and 0 <= y and y <= t and x != y",
        samples: &[&[0, 0], &[2, 3], &[5, 1]],
    },
    Fixture {
        name: "three_param_box",
        src: "param a b c; free x; 0 <= x and x <= a and x <= b + c and 2 | x + c",
        samples: &[&[5, 1, 1], &[9, 3, 0], &[4, 4, 4]],
    },
    Fixture {
        name: "sparse_lattice",
        src: "param t; free x y; 0 <= x and x <= t and 0 <= y and y <= t and 3 | x + 2*y",
        samples: &[&[0], &[2], &[8]],
    },
];
