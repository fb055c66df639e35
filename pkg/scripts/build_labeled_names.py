"""Write the reference labeled-name table used to train the name model.

Each profile gets first and last names typical of it; full names are the
pairings ``first[i] + last[(i * 7 + k) % len(last)]`` so every first and
every last name appears several times.

    python scripts/build_labeled_names.py > src/maskshift/data/labeled_names.csv
"""
import csv
import sys

NAMES = {
    "British": (
        "john james william george thomas charles edward henry oliver harry jack emily charlotte "
        "sophie amelia alice elizabeth margaret",
        "smith jones taylor brown williams wilson johnson davies robinson wright thompson evans "
        "walker white roberts green hall wood harris clarke cooper",
    ),
    "WestEuropean": (
        "jean pierre louis francois philippe michel nicolas antoine julien marie camille chloe "
        "manon juliette amelie isabelle",
        "dubois moreau laurent lefebvre lambert fontaine rousseau girard bonnet dupont lemaire "
        "mercier blanc guerin faure chevalier beaumont devereux",
    ),
    "Germanic": (
        "hans klaus jurgen wolfgang dieter helmut lukas felix matthias stefan greta heike ursula "
        "ingrid sabine anke",
        "muller schmidt schneider fischer weber meyer wagner becker hoffmann schulz koch richter "
        "klein wolf schroeder neumann zimmermann kruger",
    ),
    "Italian": (
        "giuseppe giovanni marco luca francesco alessandro matteo lorenzo giulia francesca chiara "
        "alessandra federica valentina paolo antonio",
        "rossi russo ferrari esposito bianchi romano colombo ricci marino greco bruno gallo conti "
        "deluca mancini costa giordano rizzo lombardi moretti",
    ),
    "EastEuropean": (
        "ivan dmitri sergei vladimir aleksandr piotr tomasz pavel andrei olga natalia svetlana "
        "katarzyna agnieszka irina tatiana",
        "ivanov petrov smirnov kuznetsov popov sokolov kowalski nowak wisniewski wojcik "
        "kaminski lewandowski novak horvat popescu volkov morozov pavlov",
    ),
    "Jewish": (
        "avi moshe yosef chaim shlomo eliezer mordechai yitzhak miriam rivka shoshana esther "
        "chana devorah aaron ari",
        "cohen levy goldberg friedman katz rosenberg shapiro weinstein goldstein rosenthal "
        "birnbaum silverman greenberg horowitz feldman kaplan adler blum",
    ),
    "Hispanic": (
        "jose juan carlos luis miguel alejandro javier diego santiago maria guadalupe lucia "
        "carmen sofia valeria ximena",
        "garcia rodriguez martinez hernandez lopez gonzalez perez sanchez ramirez torres flores "
        "rivera gomez diaz morales reyes gutierrez ortiz",
    ),
    "African": (
        "kwame kofi chinedu oluwaseun emeka tunde jabari sipho thabo amara ngozi chiamaka "
        "folake adaeze nia zuri",
        "okafor mensah adeyemi okonkwo nwosu boateng owusu asante mbeki ndlovu dlamini "
        "abubakar eze obi achebe oyelaran banda kamau",
    ),
    "Muslim": (
        "mohammed ahmed ali omar hassan hussein yusuf ibrahim mustafa fatima aisha zainab "
        "khadija maryam layla samira",
        "khan rahman hussain abdullah mahmoud haddad nasser saleh aziz karimi hosseini "
        "farouk qureshi siddiqui ansari malik sheikh mansour",
    ),
    "EastAsian": (
        "wei jun hao jian ming xiaoming minjun seojun jiho li na mei xiu ying jiwoo seoyeon",
        "wang li zhang liu chen yang huang zhao zhou wu xu sun kim lee park choi jung kang",
    ),
    "Japanese": (
        "hiroshi takeshi kenji haruto yuto sota daiki ren yui hina sakura aoi yuki haruka "
        "akiko naoko",
        "sato suzuki takahashi tanaka watanabe ito yamamoto nakamura kobayashi kato yoshida "
        "yamada sasaki yamaguchi matsumoto inoue kimura hayashi",
    ),
    "Indian": (
        "rahul amit vikram arjun rohan sanjay rajesh suresh anil priya pooja ananya deepika "
        "lakshmi kavya sunita",
        "sharma patel singh kumar gupta reddy iyer nair mehta joshi desai rao agarwal chopra "
        "banerjee chatterjee menon pillai",
    ),
}


def main():
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["full_name", "profile"])
    for profile, (firsts, lasts) in NAMES.items():
        firsts, lasts = firsts.split(), lasts.split()
        for k in range(3):
            for i, first in enumerate(firsts):
                last = lasts[(i * 7 + k) % len(lasts)]
                w.writerow([f"{first.title()} {last.title()}", profile])


if __name__ == "__main__":
    main()
