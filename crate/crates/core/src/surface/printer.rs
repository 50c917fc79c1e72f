use crate::syntax::*;

const OR: u8 = 1;
const AND: u8 = 2;
const PREFIX: u8 = 3;

const CHOICE: u8 = 1;
const SEQ: u8 = 2;
const POSTFIX: u8 = 3;
const OPERAND: u8 = 4;

fn paren(s: String, yes: bool) -> String {
    if yes {
        format!("({})", s)
    } else {
        s
    }
}

fn is_numeral(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_digit())
}

fn term(t: &Term, ctx: u8) -> String {
    match t {
        Term::Var(x) => x.clone(),
        Term::Const(c) if is_numeral(c) => c.clone(),
        Term::Const(c) => format!("{}()", c),
        Term::App(f, args) => match (f.as_str(), args.as_slice()) {
            ("+" | "-", [a, b]) => paren(format!("{} {} {}", term(a, 1), f, term(b, 2)), ctx > 1),
            ("*" | "/", [a, b]) => paren(format!("{} {} {}", term(a, 2), f, term(b, 3)), ctx > 2),
            ("-", [a]) => paren(format!("-{}", term(a, 3)), ctx > 3),
            _ => format!("{}({})", f, args.iter().map(|a| term(a, 0)).collect::<Vec<_>>().join(", ")),
        },
    }
}

pub fn print_term(t: &Term) -> String {
    term(t, 0)
}

fn atom(a: &Atom) -> String {
    match a {
        Atom::Eq(l, r) => format!("{} = {}", term(l, 0), term(r, 0)),
        Atom::Pred(p, args) if (p == "<=" || p == ">=") && args.len() == 2 => {
            format!("{} {} {}", term(&args[0], 0), p, term(&args[1], 0))
        }
        Atom::Pred(p, args) if args.is_empty() => p.clone(),
        Atom::Pred(p, args) => format!("{}({})", p, args.iter().map(|a| term(a, 0)).collect::<Vec<_>>().join(", ")),
    }
}

fn literal(l: &Literal) -> String {
    match (&l.atom, l.positive) {
        (a, true) => atom(a),
        (Atom::Eq(a, b), false) => format!("{} != {}", term(a, 0), term(b, 0)),
        (a, false) => format!("!{}", atom(a)),
    }
}

fn tags(ts: &[Swap]) -> String {
    ts.iter().map(|(x, y)| format!("@({}, {})", x, y)).collect()
}

pub fn print_action(a: &Action) -> String {
    match a {
        Action::Named { name, tags: ts } => format!("{}{}", name, tags(ts)),
        Action::Assign(x, t) => format!("{} := {}", x, term(t, 0)),
        Action::Random(x) => format!("{} := *", x),
        Action::Ode { eqs, constraint } => {
            let eqs: Vec<String> = eqs.iter().map(|(x, t)| format!("{}' = {}", x, term(t, 0))).collect();
            match constraint {
                Some(c) => format!("{{{} & {}}}", eqs.join(", "), mu(c, 0)),
                None => format!("{{{}}}", eqs.join(", ")),
            }
        }
    }
}

fn mu(f: &MuFormula, ctx: u8) -> String {
    match f {
        MuFormula::Lit(l) => literal(l),
        MuFormula::Var(x) => x.to_string(),
        MuFormula::Or(a, b) => paren(format!("{} | {}", mu(a, OR), mu(b, AND)), ctx > OR),
        MuFormula::And(a, b) => paren(format!("{} & {}", mu(a, AND), mu(b, PREFIX)), ctx > AND),
        MuFormula::Diamond(a, g) => format!("<{}> {}", print_action(a), mu(g, PREFIX)),
        MuFormula::Box(a, g) => format!("[{}] {}", print_action(a), mu(g, PREFIX)),
        MuFormula::Mu(x, g) => format!("mu {}. {}", x, mu(g, PREFIX)),
        MuFormula::Nu(x, g) => format!("nu {}. {}", x, mu(g, PREFIX)),
    }
}

pub fn print_mu(f: &MuFormula) -> String {
    mu(f, 0)
}

fn gl(f: &GlFormula, ctx: u8) -> String {
    match f {
        GlFormula::Lit(l) => literal(l),
        GlFormula::Var(x) => x.to_string(),
        GlFormula::Not(g) => format!("!{}", gl(g, PREFIX)),
        GlFormula::Or(a, b) => paren(format!("{} | {}", gl(a, OR), gl(b, AND)), ctx > OR),
        GlFormula::Diamond(g, b) => format!("<{}> {}", game(g, 0), gl(b, PREFIX)),
    }
}

pub fn print_gl(f: &GlFormula) -> String {
    gl(f, 0)
}

fn game(g: &Game, ctx: u8) -> String {
    match g {
        Game::Act(a @ Action::Named { .. }) => print_action(a),
        Game::Act(a @ Action::Ode { .. }) => print_action(a),
        Game::Act(a) => paren(print_action(a), ctx >= OPERAND),
        Game::Test(f) => paren(format!("?{}", gl(f, 0)), ctx >= OPERAND),
        Game::Choice(a, b) => paren(format!("{} u {}", game(a, CHOICE), game(b, SEQ)), ctx > CHOICE),
        Game::Seq(a, b) => paren(format!("{}; {}", game(a, SEQ), game(b, POSTFIX)), ctx > SEQ),
        Game::Repeat(a) => format!("{}*", game(a, OPERAND)),
        Game::Dual(a) => format!("{}^d", game(a, OPERAND)),
    }
}

pub fn print_game(g: &Game) -> String {
    game(g, 0)
}
