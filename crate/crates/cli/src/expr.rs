//! Polynomial expressions in `x` for `--u`, e.g. `x`, `x^2`, `0.5*x^2 - 3x + 1`.

use equipoise::Polynomial;

/// Parses a sum of terms `[coef][*]x[^k]` or constants.
pub fn parse_polynomial(src: &str) -> Result<Polynomial, String> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty expression".into());
    }
    let mut coefficients: Vec<f64> = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < chars.len() {
        let mut sign = 1.0;
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -1.0;
                pos += 1;
            }
            _ if !first => {
                return Err(format!("expected '+' or '-' at position {pos} in '{src}'"));
            }
            _ => {}
        }
        first = false;

        let start = pos;
        while pos < chars.len() && is_number_char(&chars, pos) {
            pos += 1;
        }
        let number: String = chars[start..pos].iter().collect();
        let coefficient = if number.is_empty() {
            None
        } else {
            Some(
                number
                    .parse::<f64>()
                    .map_err(|_| format!("bad number '{number}' in '{src}'"))?,
            )
        };

        if coefficient.is_some() && pos < chars.len() && chars[pos] == '*' {
            pos += 1;
            if pos >= chars.len() || chars[pos] != 'x' {
                return Err(format!("expected 'x' after '*' in '{src}'"));
            }
        }
        let power = if pos < chars.len() && chars[pos] == 'x' {
            pos += 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits: String = chars[start..pos].iter().collect();
                digits
                    .parse::<usize>()
                    .map_err(|_| format!("expected a nonnegative integer power in '{src}'"))?
            } else {
                1
            }
        } else if coefficient.is_some() {
            0
        } else {
            return Err(format!("unexpected input at position {pos} in '{src}'"));
        };
        if power > 64 {
            return Err(format!("power {power} is too large"));
        }

        if coefficients.len() <= power {
            coefficients.resize(power + 1, 0.0);
        }
        coefficients[power] += sign * coefficient.unwrap_or(1.0);
    }
    Polynomial::new(coefficients).map_err(|e| e.to_string())
}

// Digits, '.', and an exponent such as `e-3` following a mantissa.
fn is_number_char(chars: &[char], pos: usize) -> bool {
    let c = chars[pos];
    if c.is_ascii_digit() || c == '.' {
        return true;
    }
    let after_mantissa = pos > 0 && (chars[pos - 1].is_ascii_digit() || chars[pos - 1] == '.');
    if (c == 'e' || c == 'E') && after_mantissa {
        return chars
            .get(pos + 1)
            .is_some_and(|n| n.is_ascii_digit() || *n == '-' || *n == '+');
    }
    (c == '-' || c == '+') && pos > 0 && matches!(chars[pos - 1], 'e' | 'E')
}
