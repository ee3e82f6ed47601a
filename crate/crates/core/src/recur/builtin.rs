//! Transcribed recursion polynomials for SG_{2,2} and SG_{2,3}.

use crate::derive::{Polynomial, RecursionSystem};
use crate::error::{Error, Result};

const VARS: [&str; 4] = ["a", "b", "c", "d"];

const SG22_A: &str = "\
    5a^3+8a^2b+6a^2c+3ab^2+4abc+ac^2";

const SG22_B: &str = "\
    12a^3+35a^2b+24a^2c+30ab^2+34abc+4ac^2+8b^3+12b^2c+3bc^2";

const SG22_C: &str = "\
    6a^3+26a^2b+39a^2c+9a^2d+30ab^2+76abc+12abd+40ac^2+6acd+10b^3+33b^2c+4b^2d\
    +30bc^2+4bcd+7c^3+c^2d";

const SG22_D: &str = "\
    24a^3+126a^2b+180a^2c+54a^2d+198ab^2+540abc+144abd+360ac^2+180acd+18ad^2+92b^3\
    +354b^2c+84b^2d+438bc^2+192bcd+18bd^2+172c^3+102c^2d+18cd^2+d^3";

const SG23_A: &str = "\
    140a^6+644a^5b+588a^5c+45a^5d+1141a^4b^2+1988a^4bc+132a^4bd+812a^4c^2+84a^4cd\
    +978a^3b^3+2445a^3b^2c+143a^3b^2d+1908a^3bc^2+176a^3bcd+460a^3c^3+50a^3c^2d\
    +407a^2b^4+1300a^2b^3c+68a^2b^3d+1455a^2b^2c^2+122a^2b^2cd+668a^2bc^3+68a^2bc^2d\
    +104a^2c^4+12a^2c^3d+66ab^5+253ab^4c+12ab^4d+362ab^3c^2+28ab^3cd+239ab^2c^3\
    +23ab^2c^2d+72abc^4+8abc^3d+8ac^5+ac^4d";

const SG23_B: &str = "\
    918a^6+5360a^5b+4932a^5c+504a^5d+12403a^4b^2+21524a^4bc+1905a^4bd+8606a^4c^2\
    +1200a^4cd+14634a^3b^3+35910a^3b^2c+2786a^3b^2d+26784a^3bc^2+3260a^3bcd\
    +5840a^3c^3+776a^3c^2d+9338a^2b^4+28846a^2b^3c+1988a^2b^3d+30228a^2b^2c^2\
    +3284a^2b^2cd+12248a^2bc^3+1502a^2bc^2d+1514a^2c^4+192a^2c^3d+3072ab^5\
    +11230ab^4c+696ab^4d+14774ab^3c^2+1456ab^3cd+8426ab^2c^3+962ab^2c^2d+1968abc^4\
    +236abc^3d+140ac^5+16ac^4d+409b^6+1704b^5c+96b^5d+2652b^4c^2+240b^4cd+1906b^3c^3\
    +204b^3c^2d+633b^2c^4+72b^2c^3d+84bc^5+9bc^4d+2c^6";

const SG23_C: &str = "\
    966a^6+6848a^5b+8040a^5c+1584a^5d+19150a^4b^2+43004a^4bc+7746a^4bd+23198a^4c^2\
    +7617a^4cd+513a^4d^2+27096a^3b^3+87117a^3b^2c+14345a^3b^2d+89220a^3bc^2\
    +26528a^3bcd+1602a^3bd^2+28820a^3c^3+11336a^3c^2d+1152a^3cd^2+27a^3d^3\
    +20540a^2b^4+84010a^2b^3c+12692a^2b^3d+122577a^2b^2c^2+33260a^2b^2cd\
    +1830a^2b^2d^2+74852a^2bc^3+26816a^2bc^2d+2514a^2bcd^2+54a^2bd^3+15926a^2c^4\
    +6558a^2c^3d+786a^2c^2d^2+27a^2cd^3+7950ab^5+38827ab^4c+5412ab^4d+71948ab^3c^2\
    +17980ab^3cd+912ab^3d^2+62663ab^2c^3+20741ab^2c^2d+1812ab^2cd^2+36ab^2d^3\
    +25404abc^4+9800abc^3d+1110abc^2d^2+36abcd^3+3812ac^5+1624ac^4d+216ac^3d^2\
    +9ac^2d^3+1234b^6+6924b^5c+896b^5d+15333b^4c^2+3560b^4cd+168b^4d^2+17026b^3c^3\
    +5264b^3c^2d+432b^3cd^2+8b^3d^3+9933b^2c^4+3622b^2c^3d+390b^2c^2d^2+12b^2cd^3\
    +2880bc^5+1174bc^4d+150bc^3d^2+6bc^2d^3+326c^6+145c^5d+21c^4d^2+c^3d^3";

const SG23_D: &str = "\
    7458a^6+60264a^5b+75780a^5c+17820a^5d+195930a^4b^2+482400a^4bc+108972a^4bd\
    +292950a^4c^2+128844a^4cd+13446a^4d^2+328224a^3b^3+1185624a^3b^2c+257292a^3b^2d\
    +1406448a^3bc^2+593280a^3bcd+59400a^3bd^2+547032a^3c^3+335592a^3c^2d\
    +65016a^3cd^2+3996a^3d^3+299250a^2b^4+1409328a^2b^3c+294264a^2b^3d\
    +2449548a^2b^2c^2+993708a^2b^2cd+95940a^2b^2d^2+1859616a^2bc^3+1097496a^2bc^2d\
    +205560a^2bcd^2+12312a^2bd^3+519534a^2c^4+396072a^2c^3d+108036a^2c^2d^2\
    +12636a^2cd^3+540a^2d^4+141120ab^5+812700ab^4c+163728ab^4d+1841472ab^3c^2\
    +721296ab^3cd+67536ab^3d^2+2049912ab^2c^3+1170180ab^2c^2d+213336ab^2cd^2\
    +12528ab^2d^3+1120104abc^4+828576abc^3d+221112abc^2d^2+25488abcd^3+1080abd^4\
    +240228ac^5+216252ac^4d+75384ac^3d^2+12852ac^2d^3+1080acd^4+36ad^5+26974b^6\
    +182568b^5c+35616b^5d+506490b^4c^2+192432b^4cd+17568b^4d^2+736816b^3c^3\
    +409080b^3c^2d+73008b^3cd^2+4224b^3d^3+592746b^2c^4+428100b^2c^3d\
    +112356b^2c^2d^2+12816b^2cd^3+540b^2d^4+250176bc^5+220956bc^4d+76104bc^3d^2\
    +12888bc^2d^3+1080bcd^4+36bd^5+43354c^6+45132c^5d+19206c^4d^2+4308c^3d^3\
    +540c^2d^4+36cd^5+d^6";

/// Cubic cofactor in the direct formula for `f_{2,3}(n + 1)`.
pub(crate) const SG23_F_COFACTOR: &str = "\
    501a^3+1638a^2b+1773a^2c+297a^2d+1755ab^2+3744abc+621abd+1971ac^2+648acd+54ad^2\
    +614b^3+1929b^2c+318b^2d+1986bc^2+651bcd+54bd^2+667c^3+327c^2d+54cd^2+3d^3";

fn system(b: u32, texts: [&str; 4]) -> Result<RecursionSystem> {
    let polys = texts
        .iter()
        .map(|t| Polynomial::parse(t, &VARS))
        .collect::<Result<Vec<_>>>()?;
    let system = RecursionSystem {
        d: 2,
        b,
        pieces: (b * (b + 1) / 2) as usize,
        variables: VARS.iter().map(|v| v.to_string()).collect(),
        polys,
    };
    system.validate()?;
    Ok(system)
}

/// Built-in recursion for `(d, b)` in `{(2, 2), (2, 3)}`.
pub fn builtin_system(d: u32, b: u32) -> Result<RecursionSystem> {
    match (d, b) {
        (2, 2) => system(2, [SG22_A, SG22_B, SG22_C, SG22_D]),
        (2, 3) => system(3, [SG23_A, SG23_B, SG23_C, SG23_D]),
        _ => Err(Error::Unsupported(format!("no built-in recursion for SG_{{{d},{b}}}"))),
    }
}

pub(crate) fn cofactor_23() -> Polynomial {
    Polynomial::parse(SG23_F_COFACTOR, &VARS).expect("embedded cofactor parses")
}
