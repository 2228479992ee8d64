//! Embedded 12x16 glyph bitmaps covering A-Z, a-z, 0-9.
//!
//! The shapes are deliberate, not decorative: characters used as keypoint
//! sources carry the tip geometry their table membership claims ('V' ends
//! in a single lowest pixel, 'T' has a full-width single top row, 'L' has
//! squared bottom corners, 'r' a short right arm, and so on). Every glyph
//! except 'i' and 'j' is a single 8-connected component so that the
//! leftmost/rightmost component of a word is the character itself.
//!
//! Rows run top to bottom; `#` is ink. Capitals and digits sit on rows
//! 0..=13, lowercase x-height shapes on 4..=13, descenders reach row 15.

pub(super) const BASE_GLYPH_W: u32 = 12;
pub(super) const BASE_GLYPH_H: u32 = 16;

pub(super) const GLYPH_ROWS: &[(char, [&str; 16])] = &[
    (
        'A',
        [
            ".....#......",
            ".....##.....",
            "....####....",
            "....#..#....",
            "...##..##...",
            "...#....#...",
            "..##....##..",
            "..#......#..",
            "..########..",
            ".##......##.",
            ".#........#.",
            ".#........#.",
            ".#........#.",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'B',
        [
            "#########...",
            "##########..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##########..",
            "#########...",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##########..",
            "#########...",
            "............",
            "............",
        ],
    ),
    (
        'C',
        [
            "...######...",
            "..########..",
            ".##......##.",
            "##........##",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        'D',
        [
            "########....",
            "#########...",
            "##......##..",
            "##.......##.",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##.......##.",
            "##......##..",
            "#########...",
            "########....",
            "............",
            "............",
        ],
    ),
    (
        'E',
        [
            "############",
            "############",
            "##..........",
            "##..........",
            "##..........",
            "##########..",
            "##########..",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "############",
            "############",
            "............",
            "............",
        ],
    ),
    (
        'F',
        [
            "############",
            "############",
            "##..........",
            "##..........",
            "##..........",
            "##########..",
            "##########..",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "............",
            "............",
        ],
    ),
    (
        'G',
        [
            "...#######..",
            "..########..",
            ".##.........",
            "##..........",
            "##..........",
            "##..........",
            "##...######.",
            "##...######.",
            "##........##",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        'H',
        [
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "############",
            "############",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'I',
        [
            "..########..",
            "..########..",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            "..########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'J',
        [
            "....########",
            "....########",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "##......##..",
            ".########...",
            "..######....",
            "............",
            "............",
        ],
    ),
    (
        'K',
        [
            "##......##..",
            "##.....##...",
            "##....##....",
            "##...##.....",
            "##..##......",
            "##.##.......",
            "####........",
            "####........",
            "##.##.......",
            "##..##......",
            "##...##.....",
            "##....##....",
            "##.....##...",
            "##......##..",
            "............",
            "............",
        ],
    ),
    (
        'L',
        [
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "############",
            "############",
            "............",
            "............",
        ],
    ),
    (
        'M',
        [
            "##........##",
            "###......###",
            "####....####",
            "##.##..##.##",
            "##.##..##.##",
            "##..####..##",
            "##..####..##",
            "##...##...##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'N',
        [
            "##........##",
            "###.......##",
            "####......##",
            "##.##.....##",
            "##..##....##",
            "##...##...##",
            "##....##..##",
            "##.....##.##",
            "##......####",
            "##.......###",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'O',
        [
            "...######...",
            "..########..",
            ".##......##.",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        'P',
        [
            "#########...",
            "##########..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##########..",
            "#########...",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "............",
            "............",
        ],
    ),
    (
        'Q',
        [
            "...######...",
            "..########..",
            ".##......##.",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##...##...##",
            "##....##..##",
            "##.....##.##",
            ".##.....###.",
            "..#########.",
            "...######.##",
            "............",
            "............",
        ],
    ),
    (
        'R',
        [
            "#########...",
            "##########..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##########..",
            "#########...",
            "##..##......",
            "##...##.....",
            "##....##....",
            "##.....##...",
            "##......##..",
            "##.......##.",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'S',
        [
            "..#########.",
            ".##########.",
            "##..........",
            "##..........",
            ".##.........",
            "..########..",
            "...########.",
            "..........##",
            "..........##",
            "..........##",
            "..........##",
            ".#........##",
            ".##########.",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'T',
        [
            "############",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            "............",
            "............",
        ],
    ),
    (
        'U',
        [
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        'V',
        [
            "##........##",
            ".##......##.",
            ".##......##.",
            ".##......##.",
            "..##....##..",
            "..##....##..",
            "...##..##...",
            "...##..##...",
            "....#..#....",
            "....#..#....",
            "....####....",
            ".....##.....",
            ".....#......",
            ".....#......",
            "............",
            "............",
        ],
    ),
    (
        'W',
        [
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##...##...##",
            "##..####..##",
            "##..####..##",
            "##.##..##.##",
            ".###....###.",
            ".###....###.",
            "..#......#..",
            "..#......#..",
            "............",
            "............",
        ],
    ),
    (
        'X',
        [
            "##........##",
            ".##......##.",
            "..##....##..",
            "...##..##...",
            "....#..#....",
            "....####....",
            ".....##.....",
            "....####....",
            "....#..#....",
            "...##..##...",
            "..##....##..",
            ".##......##.",
            "##........##",
            "##........##",
            "............",
            "............",
        ],
    ),
    (
        'Y',
        [
            "##........##",
            ".##......##.",
            ".##......##.",
            "..##....##..",
            "...##..##...",
            "....#..#....",
            "....####....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            ".....##.....",
            "............",
            "............",
        ],
    ),
    (
        'Z',
        [
            "############",
            "############",
            "........##..",
            ".......##...",
            "......##....",
            ".....##.....",
            "....##......",
            "...##.......",
            "..##........",
            ".##.........",
            "##..........",
            "##..........",
            "############",
            "############",
            "............",
            "............",
        ],
    ),
    (
        'a',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            "..########..",
            "........##..",
            "..########..",
            ".#########..",
            "##......##..",
            "##......##..",
            "##......##..",
            ".#########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'b',
        [
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##.######...",
            "##########..",
            "###.....##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "###.....##..",
            "##########..",
            "##.######...",
            "............",
            "............",
        ],
    ),
    (
        'c',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            ".#########..",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            ".##.........",
            ".#########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'd',
        [
            "........##..",
            "........##..",
            "........##..",
            "........##..",
            "..########..",
            ".#########..",
            "##.....###..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##.....###..",
            ".#########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'e',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            ".#########..",
            "##......##..",
            "##......##..",
            "##########..",
            "##########..",
            "##..........",
            "##..........",
            ".#########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'f',
        [
            "....######..",
            "...#######..",
            "...##.......",
            "...##.......",
            ".########...",
            ".########...",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "............",
            "............",
        ],
    ),
    (
        'g',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            ".#########..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            ".#########..",
            "..########..",
            "........##..",
            "........##..",
            ".########...",
            ".#######....",
        ],
    ),
    (
        'h',
        [
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##.######...",
            "##########..",
            "###.....##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "............",
            "............",
        ],
    ),
    (
        'i',
        [
            "....##......",
            "....##......",
            "............",
            "............",
            "..####......",
            "..####......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "..########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'j',
        [
            "......##....",
            "......##....",
            "............",
            "............",
            "....####....",
            "....####....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            ".######.....",
            "..####......",
        ],
    ),
    (
        'k',
        [
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##.....##...",
            "##....##....",
            "##...##.....",
            "##..##......",
            "####........",
            "####........",
            "##.##.......",
            "##..##......",
            "##...##.....",
            "##....##....",
            "............",
            "............",
        ],
    ),
    (
        'l',
        [
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "............",
            "............",
        ],
    ),
    (
        'm',
        [
            "............",
            "............",
            "............",
            "............",
            "#########...",
            "##########..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "##..##..##..",
            "............",
            "............",
        ],
    ),
    (
        'n',
        [
            "............",
            "............",
            "............",
            "............",
            "#########...",
            "##########..",
            "###.....##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "............",
            "............",
        ],
    ),
    (
        'o',
        [
            "............",
            "............",
            "............",
            "............",
            "..######....",
            ".########...",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            ".########...",
            "..######....",
            "............",
            "............",
        ],
    ),
    (
        'p',
        [
            "............",
            "............",
            "............",
            "............",
            "##.######...",
            "##########..",
            "###.....##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "###.....##..",
            "##########..",
            "##.######...",
            "##..........",
            "##..........",
            "##..........",
        ],
    ),
    (
        'q',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            ".#########..",
            "##.....###..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##.....###..",
            ".#########..",
            "..########..",
            "........##..",
            "........##..",
            "........##..",
        ],
    ),
    (
        'r',
        [
            "............",
            "............",
            "............",
            "............",
            "##..####....",
            "##.##..##...",
            "####....##..",
            "##......#...",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "##..........",
            "............",
            "............",
        ],
    ),
    (
        's',
        [
            "............",
            "............",
            "............",
            "............",
            "..########..",
            ".#########..",
            "##..........",
            ".##.........",
            "..#######...",
            "...########.",
            "..........##",
            ".#........##",
            ".##########.",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        't',
        [
            "............",
            "............",
            "...##.......",
            "...##.......",
            ".########...",
            ".########...",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...##.......",
            "...#######..",
            "....######..",
            "............",
            "............",
        ],
    ),
    (
        'u',
        [
            "............",
            "............",
            "............",
            "............",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            "##......##..",
            ".#########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        'v',
        [
            "............",
            "............",
            "............",
            "............",
            "##......##..",
            ".##....##...",
            ".##....##...",
            ".##....##...",
            "..##..##....",
            "..##..##....",
            "...####.....",
            "...####.....",
            "....#.......",
            "....#.......",
            "............",
            "............",
        ],
    ),
    (
        'w',
        [
            "............",
            "............",
            "............",
            "............",
            "##........##",
            "##........##",
            "##...##...##",
            "##..####..##",
            "##..####..##",
            "##.##..##.##",
            ".###....###.",
            ".###....###.",
            "..#......#..",
            "..#......#..",
            "............",
            "............",
        ],
    ),
    (
        'x',
        [
            "............",
            "............",
            "............",
            "............",
            "##......##..",
            ".##....##...",
            ".##....##...",
            "..##..##....",
            "...####.....",
            "...####.....",
            "..##..##....",
            ".##....##...",
            ".##....##...",
            "##......##..",
            "............",
            "............",
        ],
    ),
    (
        'y',
        [
            "............",
            "............",
            "............",
            "............",
            "##......##..",
            ".##....##...",
            ".##....##...",
            ".##....##...",
            "..##..##....",
            "..##..##....",
            "...####.....",
            "...####.....",
            "....##......",
            "....##......",
            "...##.......",
            "..#.........",
        ],
    ),
    (
        'z',
        [
            "............",
            "............",
            "............",
            "............",
            "##########..",
            "##########..",
            "......##....",
            ".....##.....",
            "....##......",
            "...##.......",
            "..##........",
            ".##.........",
            ".########...",
            "##########..",
            "............",
            "............",
        ],
    ),
    (
        '0',
        [
            "...######...",
            "..########..",
            ".##......##.",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        '1',
        [
            "....#.......",
            "..####......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "....##......",
            "..########..",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        '2',
        [
            "..########..",
            ".##########.",
            "##........##",
            "..........##",
            "..........##",
            ".........##.",
            "........##..",
            "......###...",
            ".....##.....",
            "...###......",
            "..##........",
            ".##.........",
            "############",
            "############",
            "............",
            "............",
        ],
    ),
    (
        '3',
        [
            "..########..",
            ".##########.",
            "..........##",
            "..........##",
            "..........##",
            "....######..",
            "....#######.",
            "..........##",
            "..........##",
            "..........##",
            "..........##",
            "##........##",
            ".##########.",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        '4',
        [
            "......#.....",
            ".....###....",
            "....####....",
            "...##.##....",
            "..##..##....",
            ".##...##....",
            ".#....##....",
            "############",
            ".###########",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "......##....",
            "............",
            "............",
        ],
    ),
    (
        '5',
        [
            "############",
            "############",
            "##..........",
            "##..........",
            "##..........",
            "##########..",
            "###########.",
            "..........##",
            "..........##",
            "..........##",
            "..........##",
            "##........##",
            ".##########.",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        '6',
        [
            "...#######..",
            "..########..",
            ".##.........",
            "##..........",
            "##..........",
            "##.######...",
            "##########..",
            "###......##.",
            "##........##",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "...######...",
            "............",
            "............",
        ],
    ),
    (
        '7',
        [
            "############",
            "############",
            "..........##",
            ".........##.",
            "........##..",
            ".......##...",
            "......##....",
            "......##....",
            ".....##.....",
            ".....##.....",
            "....##......",
            "....##......",
            "...##.......",
            "...##.......",
            "............",
            "............",
        ],
    ),
    (
        '8',
        [
            "..########..",
            ".##########.",
            "##........##",
            "##........##",
            ".##......##.",
            "..########..",
            "..########..",
            ".##......##.",
            "##........##",
            "##........##",
            "##........##",
            "##........##",
            ".##########.",
            "..########..",
            "............",
            "............",
        ],
    ),
    (
        '9',
        [
            "...######...",
            "..########..",
            ".##......##.",
            "##........##",
            "##........##",
            "##........##",
            ".##......###",
            "..##########",
            "...######.##",
            "..........##",
            "..........##",
            ".........##.",
            "..########..",
            "..#######...",
            "............",
            "............",
        ],
    ),
];
